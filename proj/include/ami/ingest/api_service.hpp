// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/agent/conversation_store.hpp"
#include "ami/agent/orchestrator.hpp"
#include "ami/agent/planner.hpp"
#include "ami/ingest/auth.hpp"
#include "ami/mcp/server.hpp"
#include "ami/timeseries/reading_store.hpp"
#include "ami/tools/records.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ami::ingest {

/// Transport-neutral request. Header names are lowercase.
struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> headers;
    std::map<std::string, std::string> query;
    std::string body;

    std::optional<std::string> header(std::string_view name) const;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;

    static HttpResponse json(int status, const nlohmann::json& body);
};

/// Everything the routes operate on. References must outlive the service.
struct ApiDependencies {
    timeseries::ReadingStore& readings;
    tools::IssueStore& issues;
    tools::ProfileStore& profiles;
    const UserDirectory& users;
    SessionManager& sessions;
    const mcp::McpServer& mcp;
    const agent::AgentOrchestrator& orchestrator;
    const agent::Planner& planner;
    agent::ConversationStore& conversations;
    std::optional<std::string> device_key; // when set, /sensor_data/ needs X-Device-Key or a session
};

/// REST + MCP routes:
///
///     POST /sensor_data/            ingest one reading (201 / 400 / 415)
///     POST /api/login               {"username","password"} -> {"token","user_id","expires_at"}
///     POST /api/logout
///     POST /api/chat                {"message"} -> {"reply","tool_calls"}
///     GET  /api/chat/history
///     GET  /api/readings/recent     ?limit=N (default 10)
///     GET  /api/readings/range      ?start&end
///     GET  /api/readings/aggregate  ?field&start&end
///     GET  /api/export.csv          ?start&end
///     GET  /api/issues
///     GET  /api/profile, PUT /api/profile
///     GET  /api/openapi.json        (no session needed)
///     POST /mcp                     JSON-RPC, bearer session
///
/// Everything under /api except login and openapi.json needs `Authorization: Bearer <token>`.
/// Safe for concurrent calls.
class ApiService {
public:
    explicit ApiService(ApiDependencies deps);

    HttpResponse handle(const HttpRequest& request) const;

private:
    std::optional<std::string> session_user(const HttpRequest& request) const;

    HttpResponse post_sensor_data(const HttpRequest& request) const;
    HttpResponse login(const HttpRequest& request) const;
    HttpResponse logout(const HttpRequest& request) const;
    HttpResponse chat(const HttpRequest& request, const std::string& user) const;
    HttpResponse chat_history(const std::string& user) const;
    HttpResponse readings_recent(const HttpRequest& request) const;
    HttpResponse readings_range(const HttpRequest& request) const;
    HttpResponse readings_aggregate(const HttpRequest& request) const;
    HttpResponse export_csv(const HttpRequest& request) const;
    HttpResponse issues(const std::string& user) const;
    HttpResponse get_profile(const std::string& user) const;
    HttpResponse put_profile(const HttpRequest& request, const std::string& user) const;
    HttpResponse openapi_document() const;
    HttpResponse mcp_endpoint(const HttpRequest& request, const std::string& user) const;

    ApiDependencies deps_;
};

/// True for `application/json` with optional parameters, any letter case.
bool is_json_content_type(std::string_view value);

} // namespace ami::ingest
