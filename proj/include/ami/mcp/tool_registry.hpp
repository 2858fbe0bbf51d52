// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ami::mcp {

struct ToolDefinition {
    std::string name;        // [a-z][a-z0-9_]*
    std::string description;
    nlohmann::json parameters; // supported JSON-Schema subset, see schema.hpp
    std::vector<std::string> identity_params; // arguments overwritten with the acting user

    friend bool operator==(const ToolDefinition&, const ToolDefinition&) = default;
};

struct ToolResult {
    nlohmann::json content;
    bool is_error = false;

    static ToolResult ok(nlohmann::json content);
    /// content becomes {"message": message}.
    static ToolResult error(const std::string& message);

    /// {"content": ..., "is_error": ...}
    nlohmann::json to_json() const;
    static ToolResult from_json(const nlohmann::json& j);

    friend bool operator==(const ToolResult&, const ToolResult&) = default;
};

using ToolHandler = std::function<ToolResult(const nlohmann::json& args, const std::string& caller)>;

bool is_valid_tool_name(std::string_view name) noexcept;

/// Name-unique tool table in registration order. Built before the server starts and
/// read-only afterwards, so concurrent lookups need no locking.
class ToolRegistry {
public:
    /// Throws Error(duplicate_name) or Error(malformed_schema); the registry is unchanged on error.
    void register_tool(ToolDefinition definition, ToolHandler handler);

    const ToolDefinition* find(std::string_view name) const noexcept;
    const ToolHandler* handler(std::string_view name) const noexcept;

    std::vector<ToolDefinition> definitions() const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    struct Entry {
        ToolDefinition definition;
        ToolHandler handler;
    };
    std::vector<Entry> entries_;
};

} // namespace ami::mcp
