// SPDX-License-Identifier: Apache-2.0
#include "ami/common/error.hpp"

namespace ami {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_range: return "invalid-range";
    case Errc::unknown_field: return "unknown-field";
    case Errc::storage_failure: return "storage-failure";
    case Errc::duplicate_name: return "duplicate-name";
    case Errc::malformed_schema: return "malformed-schema";
    case Errc::unknown_tool: return "unknown-tool";
    case Errc::unknown_user: return "unknown-user";
    case Errc::agent_loop_exceeded: return "agent-loop-exceeded";
    case Errc::planner_unreachable: return "planner-unreachable";
    case Errc::malformed_response: return "malformed-response";
    case Errc::malformed_rules: return "malformed-rules";
    case Errc::malformed_document: return "malformed-document";
    case Errc::undefined_result: return "undefined-result";
    case Errc::missing_cell: return "missing-cell";
    case Errc::out_of_scale: return "out-of-scale";
    case Errc::config_invalid: return "config-invalid";
    case Errc::parse_error: return "parse-error";
    }
    return "unknown";
}

} // namespace ami
