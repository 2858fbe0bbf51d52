// SPDX-License-Identifier: Apache-2.0
#include "ami/app/chat_client.hpp"

#include "ami/common/error.hpp"
#include "ami/ingest/http_server.hpp"
#include "ami/mcp/server.hpp"

#include <httplib.h>

namespace ami::app {

std::string format_audit_line(const nlohmann::json& tool_call)
{
    return "[tool] " + tool_call.value("name", std::string("?")) + "(" + mcp::to_wire(tool_call.value("args", nlohmann::json::object()))
           + ") -> " + tool_call.value("summary", std::string());
}

std::vector<std::string> render_chat_response(int status, const nlohmann::json& body)
{
    std::vector<std::string> lines;
    if (body.is_object() && body.contains("tool_calls") && body["tool_calls"].is_array())
        for (const auto& call : body["tool_calls"])
            lines.push_back(format_audit_line(call));
    if (status == 200 && body.contains("reply") && body["reply"].is_string())
        lines.push_back(body["reply"].get<std::string>());
    else
        lines.push_back("error " + std::to_string(status) + ": " + body.value("message", body.dump()));
    return lines;
}

ChatClient::ChatClient(const std::string& base_url)
{
    const auto url = ingest::parse_base_url(base_url);
    client_ = std::make_unique<httplib::Client>(url.host, url.port);
    client_->set_connection_timeout(std::chrono::seconds(5));
    client_->set_read_timeout(std::chrono::seconds(300));
}

ChatClient::~ChatClient() = default;

void ChatClient::login(const std::string& user, const std::string& password)
{
    const nlohmann::json body{{"username", user}, {"password", password}};
    auto res = client_->Post("/api/login", body.dump(), "application/json");
    if (!res)
        throw Error(Errc::invalid_argument, "login failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw Error(Errc::invalid_argument, "login failed: HTTP " + std::to_string(res->status));
    const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (!parsed.is_object() || !parsed.contains("token") || !parsed["token"].is_string())
        throw Error(Errc::invalid_argument, "login failed: response has no token");
    token_ = parsed["token"].get<std::string>();
}

ChatClient::Reply ChatClient::send(const std::string& message)
{
    const httplib::Headers headers{{"Authorization", "Bearer " + token_}};
    const nlohmann::json body{{"message", message}};
    auto res = client_->Post("/api/chat", headers, body.dump(), "application/json");
    if (!res)
        throw Error(Errc::invalid_argument, "chat request failed: " + httplib::to_string(res.error()));
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded())
        parsed = nlohmann::json{{"message", res->body}};
    return Reply{res->status, std::move(parsed)};
}

} // namespace ami::app
