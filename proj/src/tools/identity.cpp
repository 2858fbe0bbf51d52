// SPDX-License-Identifier: Apache-2.0
#include "ami/tools/identity.hpp"

#include "ami/common/error.hpp"

namespace ami::tools {

nlohmann::json enforce_identity(const mcp::ToolRegistry& registry, std::string_view tool_name,
                                const nlohmann::json& args, const std::string& session_user)
{
    const auto* def = registry.find(tool_name);
    if (!def)
        throw Error(Errc::unknown_tool, "unknown tool: " + std::string(tool_name));
    if (def->identity_params.empty() || !args.is_object())
        return args;
    auto out = args;
    for (const auto& param : def->identity_params)
        out[param] = session_user;
    return out;
}

} // namespace ami::tools
