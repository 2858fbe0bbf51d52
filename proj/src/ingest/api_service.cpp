// SPDX-License-Identifier: Apache-2.0
#include "ami/ingest/api_service.hpp"

#include "ami/common/error.hpp"
#include "ami/ingest/validation.hpp"
#include "ami/mcp/json_rpc.hpp"
#include "ami/openapi/bridge.hpp"
#include "ami/tools/ami_tools.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace ami::ingest {

using nlohmann::json;

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

HttpResponse error_response(int status, std::string_view error, const std::string& message)
{
    return HttpResponse::json(status, {{"error", error}, {"message", message}});
}

HttpResponse unauthorized()
{
    return error_response(401, "unauthenticated", "missing, unknown or expired session token");
}

std::optional<std::string> query_param(const HttpRequest& r, const std::string& name)
{
    const auto it = r.query.find(name);
    if (it == r.query.end())
        return std::nullopt;
    return it->second;
}

/// RFC 3339 or integer epoch seconds.
std::optional<Timestamp> parse_instant(const std::string& text)
{
    if (auto ts = parse_rfc3339(text))
        return ts;
    std::int64_t epoch = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, epoch);
    if (text.empty() || ec != std::errc{} || ptr != end)
        return std::nullopt;
    return from_epoch_seconds(epoch);
}

/// Range from optional start/end query parameters; open ends extend to the representable limits.
std::variant<timeseries::TimeRange, HttpResponse> range_from_query(const HttpRequest& r)
{
    auto range = timeseries::TimeRange::everything();
    for (const auto* key : {"start", "end"}) {
        const auto value = query_param(r, key);
        if (!value)
            continue;
        const auto ts = parse_instant(*value);
        if (!ts)
            return error_response(400, "invalid-range", std::string(key) + " is not an RFC 3339 timestamp or epoch seconds");
        (std::string_view(key) == "start" ? range.start : range.end) = *ts;
    }
    if (range.start > range.end)
        return error_response(400, "invalid-range", "start is after end");
    return range;
}

json audit_to_json(const std::vector<agent::AuditEntry>& audit)
{
    auto calls = json::array();
    for (const auto& entry : audit)
        calls.push_back({{"id", entry.call.id},
                         {"name", entry.call.tool_name},
                         {"args", entry.call.args},
                         {"result", entry.result.content},
                         {"is_error", entry.result.is_error},
                         {"summary", agent::summarize_result(entry.result)}});
    return calls;
}

} // namespace

std::optional<std::string> HttpRequest::header(std::string_view name) const
{
    const auto it = headers.find(lower(name));
    if (it == headers.end())
        return std::nullopt;
    return it->second;
}

HttpResponse HttpResponse::json(int status, const nlohmann::json& body)
{
    return HttpResponse{status, "application/json", mcp::to_wire(body)};
}

bool is_json_content_type(std::string_view value)
{
    auto media = lower(value.substr(0, value.find(';')));
    const auto first = media.find_first_not_of(" \t");
    if (first == std::string::npos)
        return false;
    media = media.substr(first, media.find_last_not_of(" \t") - first + 1);
    return media == "application/json";
}

ApiService::ApiService(ApiDependencies deps) : deps_(std::move(deps)) {}

std::optional<std::string> ApiService::session_user(const HttpRequest& request) const
{
    const auto auth = request.header("authorization");
    if (!auth)
        return std::nullopt;
    constexpr std::string_view prefix = "bearer ";
    if (auth->size() <= prefix.size() || lower(auth->substr(0, prefix.size())) != prefix)
        return std::nullopt;
    return deps_.sessions.authenticate(std::string_view(*auth).substr(prefix.size()));
}

HttpResponse ApiService::handle(const HttpRequest& request) const
{
    try {
        const auto& path = request.path;
        const auto& method = request.method;

        if (path == "/sensor_data/" || path == "/sensor_data") {
            if (method != "POST")
                return error_response(405, "method-not-allowed", "use POST");
            return post_sensor_data(request);
        }
        if (path == "/api/login") {
            if (method != "POST")
                return error_response(405, "method-not-allowed", "use POST");
            return login(request);
        }
        if (path == "/api/openapi.json") {
            if (method != "GET")
                return error_response(405, "method-not-allowed", "use GET");
            return openapi_document();
        }

        struct Route {
            std::string_view method;
            std::string_view path;
        };
        static constexpr Route authed[] = {
            {"POST", "/api/logout"},          {"POST", "/api/chat"},          {"GET", "/api/chat/history"},
            {"GET", "/api/readings/recent"},  {"GET", "/api/readings/range"}, {"GET", "/api/readings/aggregate"},
            {"GET", "/api/export.csv"},       {"GET", "/api/issues"},         {"GET", "/api/profile"},
            {"PUT", "/api/profile"},          {"POST", "/mcp"},
        };
        const bool path_known = std::any_of(std::begin(authed), std::end(authed), [&](const Route& r) { return r.path == path; });
        if (!path_known)
            return error_response(404, "not-found", "no route for " + path);
        const bool route_known = std::any_of(std::begin(authed), std::end(authed),
                                             [&](const Route& r) { return r.path == path && r.method == method; });
        if (!route_known)
            return error_response(405, "method-not-allowed", method + " not supported on " + path);

        const auto user = session_user(request);
        if (!user)
            return unauthorized();

        if (path == "/api/logout")
            return logout(request);
        if (path == "/api/chat")
            return chat(request, *user);
        if (path == "/api/chat/history")
            return chat_history(*user);
        if (path == "/api/readings/recent")
            return readings_recent(request);
        if (path == "/api/readings/range")
            return readings_range(request);
        if (path == "/api/readings/aggregate")
            return readings_aggregate(request);
        if (path == "/api/export.csv")
            return export_csv(request);
        if (path == "/api/issues")
            return issues(*user);
        if (path == "/api/profile")
            return method == "GET" ? get_profile(*user) : put_profile(request, *user);
        return mcp_endpoint(request, *user);
    } catch (const Error& e) {
        return error_response(500, errc_name(e.code()), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

HttpResponse ApiService::post_sensor_data(const HttpRequest& request) const
{
    const auto content_type = request.header("content-type");
    if (!content_type || !is_json_content_type(*content_type))
        return error_response(415, "unsupported-media-type", "body must be application/json");

    if (deps_.device_key) {
        const auto key = request.header("x-device-key");
        if (key != deps_.device_key && !session_user(request))
            return unauthorized();
    }

    const auto body = json::parse(request.body, nullptr, false);
    if (body.is_discarded())
        return HttpResponse::json(400, {{"error", "invalid-reading"}, {"field", "body"}, {"message", "body is not valid JSON"}});

    auto outcome = validate_sensor_payload(body);
    if (const auto* violation = std::get_if<timeseries::FieldViolation>(&outcome))
        return HttpResponse::json(400,
                                  {{"error", "invalid-reading"}, {"field", violation->field}, {"message", violation->message}});

    auto& reading = std::get<timeseries::SensorReading>(outcome);
    const auto warnings = reading.flags;
    const auto id = deps_.readings.insert(std::move(reading));
    return HttpResponse::json(201, {{"stored_id", id}, {"warnings", warnings}});
}

HttpResponse ApiService::login(const HttpRequest& request) const
{
    const auto body = json::parse(request.body, nullptr, false);
    if (!body.is_object() || !body.contains("username") || !body["username"].is_string() || !body.contains("password")
        || !body["password"].is_string())
        return error_response(400, "invalid-argument", "expected {\"username\": string, \"password\": string}");

    const auto user = body["username"].get<std::string>();
    if (!deps_.users.verify(user, body["password"].get<std::string>()))
        return error_response(401, "unauthenticated", "invalid username or password");
    const auto session = deps_.sessions.open(user);
    return HttpResponse::json(
        200, {{"token", session.token}, {"user_id", session.user_id}, {"expires_at", format_rfc3339(session.expires_at)}});
}

HttpResponse ApiService::logout(const HttpRequest& request) const
{
    const auto auth = request.header("authorization").value_or("");
    deps_.sessions.revoke(std::string_view(auth).substr(std::min<std::size_t>(auth.size(), 7)));
    return HttpResponse::json(200, {{"ok", true}});
}

HttpResponse ApiService::chat(const HttpRequest& request, const std::string& user) const
{
    const auto body = json::parse(request.body, nullptr, false);
    if (!body.is_object() || !body.contains("message") || !body["message"].is_string())
        return error_response(400, "invalid-argument", "expected {\"message\": string}");
    const auto message = body["message"].get<std::string>();
    if (message.find_first_not_of(" \t\r\n") == std::string::npos)
        return error_response(400, "invalid-argument", "message must not be empty");

    const auto prompt = agent::build_system_prompt(user, deps_.profiles);
    try {
        agent::TurnResult turn;
        deps_.conversations.with_conversation(user, prompt, [&](agent::Conversation& conv) {
            turn = deps_.orchestrator.run_turn(conv, message, deps_.planner);
        });
        return HttpResponse::json(200, {{"reply", turn.reply}, {"tool_calls", audit_to_json(turn.audit)}});
    } catch (const agent::TurnError& e) {
        const int status = e.code() == Errc::agent_loop_exceeded ? 409 : 502;
        return HttpResponse::json(
            status, {{"error", errc_name(e.code())}, {"message", e.what()}, {"tool_calls", audit_to_json(e.audit())}});
    }
}

HttpResponse ApiService::chat_history(const std::string& user) const
{
    auto messages = json::array();
    if (const auto conv = deps_.conversations.snapshot(user))
        for (const auto& m : conv->messages)
            if (m.role != agent::Role::system)
                messages.push_back(agent::to_json(m));
    return HttpResponse::json(200, {{"user_id", user}, {"messages", messages}});
}

HttpResponse ApiService::readings_recent(const HttpRequest& request) const
{
    std::size_t limit = 10;
    if (const auto raw = query_param(request, "limit")) {
        const auto* end = raw->data() + raw->size();
        const auto [ptr, ec] = std::from_chars(raw->data(), end, limit);
        if (raw->empty() || ec != std::errc{} || ptr != end || limit == 0)
            return error_response(400, "invalid-argument", "limit must be a positive integer");
    }
    return HttpResponse::json(200, timeseries::to_json(deps_.readings.query_recent(limit)));
}

HttpResponse ApiService::readings_range(const HttpRequest& request) const
{
    auto range = range_from_query(request);
    if (auto* err = std::get_if<HttpResponse>(&range))
        return *err;
    return HttpResponse::json(200, timeseries::to_json(deps_.readings.query_range(std::get<timeseries::TimeRange>(range))));
}

HttpResponse ApiService::readings_aggregate(const HttpRequest& request) const
{
    auto range = range_from_query(request);
    if (auto* err = std::get_if<HttpResponse>(&range))
        return *err;
    const auto field = query_param(request, "field");
    if (!field)
        return error_response(400, "invalid-argument", "field is required");
    try {
        return HttpResponse::json(200, timeseries::to_json(deps_.readings.aggregate(std::get<timeseries::TimeRange>(range), *field)));
    } catch (const Error& e) {
        if (e.code() != Errc::unknown_field)
            throw;
        return error_response(400, "unknown-field", e.what());
    }
}

HttpResponse ApiService::export_csv(const HttpRequest& request) const
{
    auto range = range_from_query(request);
    if (auto* err = std::get_if<HttpResponse>(&range))
        return *err;
    return HttpResponse{200, "text/csv", deps_.readings.export_csv(std::get<timeseries::TimeRange>(range))};
}

HttpResponse ApiService::issues(const std::string& user) const
{
    auto out = json::array();
    for (const auto& t : tools::list_issues(deps_.issues, user))
        out.push_back(tools::to_json(t));
    return HttpResponse::json(200, out);
}

HttpResponse ApiService::get_profile(const std::string& user) const
{
    const auto profile = deps_.profiles.get(user);
    if (!profile)
        return error_response(404, "unknown-user", "no profile for " + user);
    return HttpResponse::json(200, tools::to_json(*profile));
}

HttpResponse ApiService::put_profile(const HttpRequest& request, const std::string& user) const
{
    const auto body = json::parse(request.body, nullptr, false);
    if (!body.is_object())
        return error_response(400, "invalid-argument", "body must be a JSON object");

    // Same path as the update_user_profile tool, so the session user replaces any user_id given.
    const json rpc{{"jsonrpc", "2.0"},
                   {"id", 1},
                   {"method", "tools/call"},
                   {"params", {{"name", "update_user_profile"}, {"arguments", body}}}};
    const auto response = deps_.mcp.handle(rpc, user);
    if (!response)
        return error_response(500, "internal", "no response from tool dispatch");
    if (response->contains("error"))
        return error_response(400, "invalid-argument", (*response)["error"]["message"].get<std::string>());
    const auto& result = (*response)["result"];
    const auto& content = result["structuredContent"];
    if (result["isError"].get<bool>())
        return error_response(400, "invalid-argument", content.value("message", "profile update failed"));
    return HttpResponse::json(200, content.contains("profile") ? content["profile"] : content);
}

HttpResponse ApiService::openapi_document() const
{
    return HttpResponse::json(200, openapi::registry_to_openapi(deps_.mcp.registry().definitions()));
}

HttpResponse ApiService::mcp_endpoint(const HttpRequest& request, const std::string& user) const
{
    const auto reply = deps_.mcp.handle_message(request.body, user);
    if (!reply)
        return HttpResponse{202, "application/json", ""};

    // Parse and envelope errors are transport-level failures; everything else is a 200.
    const auto parsed = json::parse(*reply, nullptr, false);
    int status = 200;
    if (parsed.is_object() && parsed.contains("error")) {
        const auto code = parsed["error"].value("code", 0);
        if (code == mcp::rpc_error::parse_error || code == mcp::rpc_error::invalid_request)
            status = 400;
    }
    return HttpResponse{status, "application/json", *reply};
}

} // namespace ami::ingest
