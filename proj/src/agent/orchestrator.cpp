// SPDX-License-Identifier: Apache-2.0
#include "ami/agent/orchestrator.hpp"

#include "ami/mcp/json_rpc.hpp"
#include "ami/tools/identity.hpp"

namespace ami::agent {

using nlohmann::json;

std::string build_system_prompt(const std::string& user_id, const tools::ProfileStore& profiles)
{
    if (!profiles.contains(user_id))
        throw Error(Errc::unknown_user, "unknown user " + user_id);
    return "You are the assistant of the Air Monitoring Interface (AMI), an indoor air-quality monitoring "
           "system. Answer questions about air quality only with values returned by the available tools, "
           "and use the tools to report issues and update profiles when asked. Never state a measurement "
           "that did not come from a tool result. "
           "You are assisting the currently logged-in user \""
           + user_id
           + "\". Every tool call acts on behalf of this user only: do not read, create or modify data "
             "belonging to any other user, and decline requests that ask you to.";
}

std::vector<ChatMessage> planner_window(const std::vector<ChatMessage>& messages, std::size_t window)
{
    if (messages.empty())
        return {};
    if (window < 2 || messages.size() <= window)
        return window < 2 ? std::vector<ChatMessage>{messages.front()} : messages;
    std::size_t first = messages.size() - (window - 1);
    while (first < messages.size() && messages[first].role == Role::tool)
        ++first;
    std::vector<ChatMessage> out;
    out.reserve(messages.size() - first + 1);
    out.push_back(messages.front());
    out.insert(out.end(), messages.begin() + static_cast<std::ptrdiff_t>(first), messages.end());
    return out;
}

std::string summarize_result(const mcp::ToolResult& result)
{
    if (result.is_error) {
        const auto msg = result.content.is_object() && result.content.contains("message")
                             ? result.content["message"].get<std::string>()
                             : result.content.dump();
        return "error: " + msg;
    }
    auto text = mcp::to_wire(result.content);
    constexpr std::size_t kMax = 160;
    if (text.size() > kMax)
        text = text.substr(0, kMax) + "...";
    return text;
}

AgentOrchestrator::AgentOrchestrator(const mcp::McpServer& server, OrchestratorOptions options)
    : server_(server), options_(options)
{
    if (options_.max_rounds < 1)
        throw Error(Errc::invalid_argument, "max_rounds must be >= 1");
}

std::vector<openapi::PlannerToolSpec> AgentOrchestrator::current_tool_specs() const
{
    return openapi::openapi_to_planner_specs(openapi::registry_to_openapi(server_.registry().definitions()));
}

mcp::ToolResult AgentOrchestrator::dispatch(const ToolCall& call, const std::string& user_id) const
{
    const json request = {
        {"jsonrpc", "2.0"},
        {"id", call.id},
        {"method", "tools/call"},
        {"params", {{"name", call.tool_name}, {"arguments", call.args}}},
    };
    const auto response = server_.handle(request, user_id);
    if (!response)
        return mcp::ToolResult::error("no response from tool server");
    if (response->contains("error"))
        return mcp::ToolResult::error((*response)["error"]["message"].get<std::string>());
    const auto& result = (*response)["result"];
    return {result.at("structuredContent"), result.at("isError").get<bool>()};
}

TurnResult AgentOrchestrator::run_turn(Conversation& conversation, std::string_view user_text,
                                       const Planner& planner) const
{
    conversation.messages.push_back(ChatMessage::user(std::string(user_text)));

    std::size_t call_seq = 0;
    for (const auto& m : conversation.messages)
        call_seq += m.tool_calls.size();

    TurnResult turn;
    for (int round = 0; round < options_.max_rounds; ++round) {
        const auto specs = current_tool_specs();
        const auto window = planner_window(conversation.messages, options_.history_window);

        std::optional<PlannerDecision> decision;
        try {
            decision = planner.decide(window, specs);
        } catch (const Error& e) {
            conversation.messages.push_back(
                ChatMessage::assistant("The assistant is unavailable right now; please try again later."));
            throw TurnError(e.code(), e.what(), std::move(turn.audit));
        }

        if (decision->is_final()) {
            turn.reply = decision->text();
            conversation.messages.push_back(ChatMessage::assistant(turn.reply));
            return turn;
        }

        std::vector<ToolCall> executed;
        for (const auto& planned : decision->calls()) {
            ToolCall call{"call_" + std::to_string(++call_seq), planned.tool_name, planned.args};
            if (server_.registry().find(call.tool_name) && call.args.is_object())
                call.args = tools::enforce_identity(server_.registry(), call.tool_name, call.args,
                                                    conversation.user_id);
            executed.push_back(std::move(call));
        }
        conversation.messages.push_back(ChatMessage::assistant("", executed));

        for (const auto& call : executed) {
            auto result = server_.registry().find(call.tool_name)
                              ? dispatch(call, conversation.user_id)
                              : mcp::ToolResult::error("unknown tool: " + call.tool_name);
            conversation.messages.push_back(ChatMessage::tool(call.id, mcp::to_wire(result.to_json())));
            turn.audit.push_back({call, std::move(result)});
        }
    }

    const auto message = "stopped after " + std::to_string(options_.max_rounds)
                         + " planning rounds without a final answer";
    conversation.messages.push_back(ChatMessage::assistant("Sorry, I could not finish this request: " + message + "."));
    throw TurnError(Errc::agent_loop_exceeded, "agent loop exceeded: " + message, std::move(turn.audit));
}

} // namespace ami::agent
