// SPDX-License-Identifier: Apache-2.0
#include "ami/agent/chat.hpp"

#include "ami/common/error.hpp"

namespace ami::agent {

using nlohmann::json;

std::string_view role_name(Role role) noexcept
{
    switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    case Role::tool: return "tool";
    }
    return "";
}

Role parse_role(std::string_view name)
{
    for (auto r : {Role::system, Role::user, Role::assistant, Role::tool})
        if (role_name(r) == name)
            return r;
    throw Error(Errc::parse_error, "unknown role " + std::string(name));
}

ChatMessage ChatMessage::system(std::string text)
{
    return {Role::system, std::move(text), std::nullopt, {}};
}

ChatMessage ChatMessage::user(std::string text)
{
    return {Role::user, std::move(text), std::nullopt, {}};
}

ChatMessage ChatMessage::assistant(std::string text, std::vector<ToolCall> calls)
{
    return {Role::assistant, std::move(text), std::nullopt, std::move(calls)};
}

ChatMessage ChatMessage::tool(std::string call_id, std::string text)
{
    return {Role::tool, std::move(text), std::move(call_id), {}};
}

json to_json(const ToolCall& call)
{
    return {{"id", call.id}, {"tool_name", call.tool_name}, {"args", call.args}};
}

json to_json(const ChatMessage& m)
{
    json j = {{"role", role_name(m.role)}, {"text", m.text}};
    if (m.tool_call_id)
        j["tool_call_id"] = *m.tool_call_id;
    if (!m.tool_calls.empty()) {
        json calls = json::array();
        for (const auto& c : m.tool_calls)
            calls.push_back(to_json(c));
        j["tool_calls"] = std::move(calls);
    }
    return j;
}

ChatMessage message_from_json(const json& j)
{
    ChatMessage m;
    m.role = parse_role(j.at("role").get<std::string>());
    m.text = j.at("text").get<std::string>();
    if (const auto id = j.find("tool_call_id"); id != j.end())
        m.tool_call_id = id->get<std::string>();
    if (const auto calls = j.find("tool_calls"); calls != j.end())
        for (const auto& c : *calls)
            m.tool_calls.push_back({c.at("id").get<std::string>(), c.at("tool_name").get<std::string>(), c.at("args")});
    return m;
}

PlannerDecision PlannerDecision::final_text(std::string text)
{
    return PlannerDecision(std::move(text));
}

PlannerDecision PlannerDecision::tool_calls(std::vector<ToolCall> calls)
{
    if (calls.empty())
        throw Error(Errc::invalid_argument, "a tool-call decision needs at least one call");
    return PlannerDecision(std::move(calls));
}

std::string render_transcript(const Conversation& conversation)
{
    std::string out;
    for (const auto& m : conversation.messages) {
        switch (m.role) {
        case Role::system:
        case Role::user:
            out += std::string(role_name(m.role)) + ": " + m.text + "\n";
            break;
        case Role::assistant:
            if (m.tool_calls.empty()) {
                out += "assistant: " + m.text + "\n";
            } else {
                for (const auto& c : m.tool_calls)
                    out += "assistant: [" + c.id + "] " + c.tool_name + " " + c.args.dump() + "\n";
            }
            break;
        case Role::tool:
            out += "tool[" + m.tool_call_id.value_or("?") + "]: " + m.text + "\n";
            break;
        }
    }
    return out;
}

} // namespace ami::agent
