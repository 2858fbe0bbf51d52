// SPDX-License-Identifier: Apache-2.0
#include "ami/mcp/json_rpc.hpp"

namespace ami::mcp {

nlohmann::json make_result(const nlohmann::json& id, nlohmann::json result)
{
    return {{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
}

nlohmann::json make_error(const nlohmann::json& id, int code, const std::string& message)
{
    return {{"jsonrpc", "2.0"}, {"id", id}, {"error", {{"code", code}, {"message", message}}}};
}

bool is_valid_id(const nlohmann::json& id) noexcept
{
    return id.is_null() || id.is_string() || id.is_number_integer();
}

} // namespace ami::mcp
