// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/mcp/tool_registry.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace ami::tools {

/// Overwrites every identity parameter declared by `tool_name` with `session_user`.
/// All other arguments are copied untouched. Pure and idempotent.
/// Throws Error(unknown_tool) when the tool is not registered.
nlohmann::json enforce_identity(const mcp::ToolRegistry& registry, std::string_view tool_name,
                                const nlohmann::json& args, const std::string& session_user);

} // namespace ami::tools
