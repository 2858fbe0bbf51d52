// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/agent/chat.hpp"
#include "ami/agent/planner.hpp"
#include "ami/common/error.hpp"
#include "ami/mcp/server.hpp"
#include "ami/mcp/tool_registry.hpp"
#include "ami/tools/records.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ami::agent {

struct OrchestratorOptions {
    int max_rounds = 5;              // planner queries per turn
    std::size_t history_window = 50; // messages handed to the planner, system prompt included
};

struct AuditEntry {
    ToolCall call; // arguments as executed, after identity enforcement
    mcp::ToolResult result;
};

struct TurnResult {
    std::string reply;
    std::vector<AuditEntry> audit;
};

/// Raised when a turn cannot finish; carries the tool calls that did execute.
class TurnError : public Error {
public:
    TurnError(Errc code, const std::string& message, std::vector<AuditEntry> audit)
        : Error(code, message), audit_(std::move(audit))
    {
    }

    const std::vector<AuditEntry>& audit() const noexcept { return audit_; }

private:
    std::vector<AuditEntry> audit_;
};

/// Role, acting user and permission boundary for the planner. Throws Error(unknown_user).
std::string build_system_prompt(const std::string& user_id, const tools::ProfileStore& profiles);

/// System prompt plus the newest `window - 1` messages, never starting on an orphaned tool message.
std::vector<ChatMessage> planner_window(const std::vector<ChatMessage>& messages, std::size_t window);

/// One-line description of a tool result for audit displays.
std::string summarize_result(const mcp::ToolResult& result);

/// The request/tool-call loop. Every tool call is identity-enforced against the conversation
/// owner and dispatched through the MCP server's tools/call path.
class AgentOrchestrator {
public:
    explicit AgentOrchestrator(const mcp::McpServer& server, OrchestratorOptions options = {});

    /// Appends the user message, then alternates planner queries and tool execution until the
    /// planner answers. Throws TurnError(agent_loop_exceeded) after max_rounds queries without an
    /// answer and TurnError(planner_unreachable / malformed_response) when the planner fails; in
    /// both cases a diagnostic assistant message closes the turn.
    TurnResult run_turn(Conversation& conversation, std::string_view user_text, const Planner& planner) const;

    /// Registry -> OpenAPI -> planner specs, recomputed on every call.
    std::vector<openapi::PlannerToolSpec> current_tool_specs() const;

    const OrchestratorOptions& options() const noexcept { return options_; }

private:
    mcp::ToolResult dispatch(const ToolCall& call, const std::string& user_id) const;

    const mcp::McpServer& server_;
    OrchestratorOptions options_;
};

} // namespace ami::agent
