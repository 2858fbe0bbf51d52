// SPDX-License-Identifier: Apache-2.0
#include "ami/mcp/tool_registry.hpp"

#include "ami/common/error.hpp"
#include "ami/mcp/schema.hpp"

#include <algorithm>

namespace ami::mcp {

ToolResult ToolResult::ok(nlohmann::json content)
{
    return {std::move(content), false};
}

ToolResult ToolResult::error(const std::string& message)
{
    return {{{"message", message}}, true};
}

nlohmann::json ToolResult::to_json() const
{
    return {{"content", content}, {"is_error", is_error}};
}

ToolResult ToolResult::from_json(const nlohmann::json& j)
{
    return {j.at("content"), j.at("is_error").get<bool>()};
}

bool is_valid_tool_name(std::string_view name) noexcept
{
    if (name.empty() || name.front() < 'a' || name.front() > 'z')
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

void ToolRegistry::register_tool(ToolDefinition definition, ToolHandler handler)
{
    if (!is_valid_tool_name(definition.name))
        throw Error(Errc::malformed_schema, "invalid tool name: \"" + definition.name + "\"");
    if (find(definition.name))
        throw Error(Errc::duplicate_name, "tool already registered: " + definition.name);
    check_schema(definition.parameters);
    const auto props = definition.parameters.find("properties");
    for (const auto& p : definition.identity_params) {
        if (props == definition.parameters.end() || !props->contains(p))
            throw Error(Errc::malformed_schema,
                        "identity parameter " + p + " is not a parameter of " + definition.name);
    }
    if (!handler)
        throw Error(Errc::invalid_argument, "tool " + definition.name + " has no handler");
    entries_.push_back({std::move(definition), std::move(handler)});
}

const ToolDefinition* ToolRegistry::find(std::string_view name) const noexcept
{
    for (const auto& e : entries_)
        if (e.definition.name == name)
            return &e.definition;
    return nullptr;
}

const ToolHandler* ToolRegistry::handler(std::string_view name) const noexcept
{
    for (const auto& e : entries_)
        if (e.definition.name == name)
            return &e.handler;
    return nullptr;
}

std::vector<ToolDefinition> ToolRegistry::definitions() const
{
    std::vector<ToolDefinition> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_)
        out.push_back(e.definition);
    return out;
}

} // namespace ami::mcp
