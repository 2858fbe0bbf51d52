// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/common/time.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ami::agent {

enum class Role { system, user, assistant, tool };

std::string_view role_name(Role role) noexcept;
Role parse_role(std::string_view name);

struct ToolCall {
    std::string id;
    std::string tool_name;
    nlohmann::json args = nlohmann::json::object();

    friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct ChatMessage {
    Role role = Role::user;
    std::string text;
    std::optional<std::string> tool_call_id; // role == tool
    std::vector<ToolCall> tool_calls;        // role == assistant

    static ChatMessage system(std::string text);
    static ChatMessage user(std::string text);
    static ChatMessage assistant(std::string text, std::vector<ToolCall> calls = {});
    static ChatMessage tool(std::string call_id, std::string text);

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

nlohmann::json to_json(const ToolCall& call);
nlohmann::json to_json(const ChatMessage& message);
ChatMessage message_from_json(const nlohmann::json& j);

/// Either the final reply or a non-empty batch of tool calls.
class PlannerDecision {
public:
    static PlannerDecision final_text(std::string text);
    /// Throws Error(invalid_argument) for an empty batch.
    static PlannerDecision tool_calls(std::vector<ToolCall> calls);

    bool is_final() const noexcept { return std::holds_alternative<std::string>(value_); }
    const std::string& text() const { return std::get<std::string>(value_); }
    const std::vector<ToolCall>& calls() const { return std::get<std::vector<ToolCall>>(value_); }

private:
    explicit PlannerDecision(std::variant<std::string, std::vector<ToolCall>> v) : value_(std::move(v)) {}
    std::variant<std::string, std::vector<ToolCall>> value_;
};

struct Conversation {
    std::string user_id;
    std::vector<ChatMessage> messages; // messages[0] is the system prompt
    Timestamp created_at{};
    Timestamp updated_at{};
};

/// Line-per-message text rendering used for golden transcripts.
std::string render_transcript(const Conversation& conversation);

} // namespace ami::agent
