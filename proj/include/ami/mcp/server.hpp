// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/mcp/tool_registry.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace ami::mcp {

inline constexpr std::string_view kProtocolVersion = "ami-mcp/1";

struct ServerInfo {
    std::string name = "ami";
    std::string version = "0.1.0";
};

/// Called after identity enforcement and schema validation, immediately before a handler runs.
using DispatchObserver =
    std::function<void(const std::string& tool, const nlohmann::json& args, const std::string& caller)>;

/// Compact single-line JSON; invalid UTF-8 in strings is replaced rather than thrown on.
std::string to_wire(const nlohmann::json& message);

/// Transport-independent MCP request handling (tools subset): initialize, ping,
/// tools/list and tools/call. Batches are rejected with -32600.
class McpServer {
public:
    explicit McpServer(const ToolRegistry& registry, ServerInfo info = {});

    /// Response line for `raw`, or nullopt for a notification.
    std::optional<std::string> handle_message(std::string_view raw, const std::string& caller) const;

    std::optional<nlohmann::json> handle(const nlohmann::json& message, const std::string& caller) const;

    void set_dispatch_observer(DispatchObserver observer) { observer_ = std::move(observer); }

    const ToolRegistry& registry() const noexcept { return registry_; }

private:
    nlohmann::json call_tool(const nlohmann::json& id, const nlohmann::json& params, const std::string& caller) const;
    nlohmann::json list_tools() const;

    const ToolRegistry& registry_;
    ServerInfo info_;
    DispatchObserver observer_;
};

/// Newline-delimited JSON-RPC over a stream pair: one request per line in, one response
/// per line out, blank lines skipped. Returns when input ends or output fails.
void serve_stdio(const McpServer& server, std::istream& in, std::ostream& out, const std::string& caller);

} // namespace ami::mcp
