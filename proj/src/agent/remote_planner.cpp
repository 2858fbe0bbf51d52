// SPDX-License-Identifier: Apache-2.0
#include "ami/agent/remote_planner.hpp"

#include "ami/common/error.hpp"

#include <httplib.h>

#include <regex>
#include <thread>

namespace ami::agent {

using nlohmann::json;

json build_chat_request(const std::string& model, std::span<const ChatMessage> messages,
                        std::span<const openapi::PlannerToolSpec> tools)
{
    auto wire_messages = json::array();
    for (const auto& m : messages) {
        json w{{"role", role_name(m.role)}, {"content", m.text}};
        if (m.role == Role::tool)
            w["tool_call_id"] = m.tool_call_id.value_or("");
        if (m.role == Role::assistant && !m.tool_calls.empty()) {
            auto calls = json::array();
            for (const auto& c : m.tool_calls)
                calls.push_back({{"id", c.id},
                                 {"type", "function"},
                                 {"function", {{"name", c.tool_name}, {"arguments", c.args.dump()}}}});
            w["tool_calls"] = calls;
            if (m.text.empty())
                w["content"] = nullptr;
        }
        wire_messages.push_back(std::move(w));
    }

    json body{{"model", model}, {"messages", wire_messages}};
    if (!tools.empty()) {
        auto wire_tools = json::array();
        for (const auto& t : tools)
            wire_tools.push_back({{"type", "function"},
                                  {"function", {{"name", t.name}, {"description", t.description}, {"parameters", t.parameters}}}});
        body["tools"] = wire_tools;
        body["tool_choice"] = "auto";
    }
    return body;
}

PlannerDecision parse_chat_response(const json& body)
{
    auto bad = [](const std::string& what) { return Error(Errc::malformed_response, "planner response: " + what); };

    if (!body.is_object() || !body.contains("choices") || !body["choices"].is_array() || body["choices"].empty())
        throw bad("missing choices");
    const auto& choice = body["choices"][0];
    if (!choice.is_object() || !choice.contains("message") || !choice["message"].is_object())
        throw bad("missing choices[0].message");
    const auto& message = choice["message"];

    if (message.contains("tool_calls") && message["tool_calls"].is_array() && !message["tool_calls"].empty()) {
        std::vector<ToolCall> calls;
        for (const auto& tc : message["tool_calls"]) {
            if (!tc.is_object() || !tc.contains("function") || !tc["function"].is_object())
                throw bad("tool call without function");
            const auto& fn = tc["function"];
            if (!fn.contains("name") || !fn["name"].is_string())
                throw bad("tool call without name");
            ToolCall call;
            call.id = tc.contains("id") && tc["id"].is_string() ? tc["id"].get<std::string>() : "";
            call.tool_name = fn["name"].get<std::string>();
            if (fn.contains("arguments")) {
                const auto& raw = fn["arguments"];
                if (raw.is_string()) {
                    const auto& s = raw.get_ref<const std::string&>();
                    call.args = s.empty() ? json::object() : json::parse(s, nullptr, false);
                } else {
                    call.args = raw;
                }
                if (!call.args.is_object())
                    throw bad("arguments of " + call.tool_name + " are not a JSON object");
            }
            calls.push_back(std::move(call));
        }
        return PlannerDecision::tool_calls(std::move(calls));
    }

    if (message.contains("content") && message["content"].is_string())
        return PlannerDecision::final_text(message["content"].get<std::string>());
    throw bad("message has neither content nor tool_calls");
}

RemotePlanner::RemotePlanner(RemotePlannerOptions options, Sleeper sleeper)
    : options_(std::move(options)), sleeper_(std::move(sleeper))
{
    static const std::regex url_re(R"(^(https?://[^/\s]+)(/[^\s]*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(options_.endpoint, m, url_re))
        throw Error(Errc::config_invalid, "remote_endpoint: not an http(s) URL: " + options_.endpoint);
    origin_ = m[1].str();
    path_ = m[2].matched ? m[2].str() : "/v1/chat/completions";
    if (options_.model.empty())
        throw Error(Errc::config_invalid, "remote_model: must be set");
    if (options_.max_attempts < 1)
        options_.max_attempts = 1;
    if (!sleeper_)
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

PlannerDecision RemotePlanner::decide(std::span<const ChatMessage> messages,
                                      std::span<const openapi::PlannerToolSpec> tools) const
{
    const auto payload = build_chat_request(options_.model, messages, tools).dump();

    httplib::Client client(origin_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    httplib::Headers headers;
    if (!options_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + options_.api_key);

    std::string last_failure;
    auto backoff = options_.initial_backoff;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        if (attempt > 1) {
            sleeper_(backoff);
            backoff *= 2;
        }
        auto res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            last_failure = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw Error(Errc::planner_unreachable, "planner endpoint returned HTTP " + std::to_string(res->status));

        auto body = json::parse(res->body, nullptr, false);
        if (body.is_discarded())
            throw Error(Errc::malformed_response, "planner response is not JSON");
        return parse_chat_response(body);
    }
    throw Error(Errc::planner_unreachable, "planner endpoint unreachable after " + std::to_string(options_.max_attempts)
                                               + " attempts: " + last_failure);
}

} // namespace ami::agent
