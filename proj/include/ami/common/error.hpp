// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ami {

enum class Errc {
    invalid_argument,
    invalid_range,
    unknown_field,
    storage_failure,
    duplicate_name,
    malformed_schema,
    unknown_tool,
    unknown_user,
    agent_loop_exceeded,
    planner_unreachable,
    malformed_response,
    malformed_rules,
    malformed_document,
    undefined_result,
    missing_cell,
    out_of_scale,
    config_invalid,
    parse_error,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` says which contract was broken.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message) : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace ami
