// SPDX-License-Identifier: Apache-2.0
#include "ami/tools/ami_tools.hpp"

#include "ami/common/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace ami::tools {

using mcp::ToolDefinition;
using mcp::ToolResult;
using nlohmann::json;

namespace {

std::string trim(const std::string& s)
{
    const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
    return first < last ? std::string(first, last) : std::string();
}

ToolResult get_recent_sensor_data(timeseries::ReadingStore& readings, const json& args)
{
    const double requested = args.contains("limit") ? args["limit"].get<double>() : 1.0;
    if (!(requested >= 1 && requested <= kMaxRecentLimit))
        return ToolResult::error("limit must be between 1 and " + std::to_string(kMaxRecentLimit));
    const auto rows = readings.query_recent(static_cast<std::size_t>(requested));
    return ToolResult::ok({{"readings", timeseries::to_json(rows)}, {"count", rows.size()}});
}

ToolResult get_sensor_stats(timeseries::ReadingStore& readings, const json& args)
{
    const auto start = parse_rfc3339(args["start"].get<std::string>());
    if (!start)
        return ToolResult::error("start is not an RFC 3339 timestamp");
    const auto end = parse_rfc3339(args["end"].get<std::string>());
    if (!end)
        return ToolResult::error("end is not an RFC 3339 timestamp");
    if (*start > *end)
        return ToolResult::error("start must not be after end");
    const auto& field = args["field"].get_ref<const std::string&>();
    if (!timeseries::parse_measurement(field))
        return ToolResult::error("field must be one of temperature, humidity, co2, pm1_0, pm2_5, pm10 (got \""
                                 + field + "\")");
    auto stats = to_json(readings.aggregate({*start, *end}, field));
    stats["start"] = format_rfc3339(*start);
    stats["end"] = format_rfc3339(*end);
    return ToolResult::ok(std::move(stats));
}

ToolResult report_issue(IssueStore& issues, const ProfileStore& profiles, const json& args)
{
    const auto description = trim(args["description"].get<std::string>());
    if (description.empty())
        return ToolResult::error("description must not be empty");
    const auto& reporter = args["user_id"].get_ref<const std::string&>();
    if (!profiles.contains(reporter))
        return ToolResult::error("unknown user " + reporter);
    const auto ticket = issues.create(reporter, description);
    return ToolResult::ok({
        {"ticket_id", ticket.id},
        {"description", ticket.description},
        {"status", "open"},
        {"reporter_user_id", ticket.reporter_user_id},
    });
}

ToolResult update_user_profile(ProfileStore& profiles, const json& args)
{
    ProfilePatch patch;
    if (args.contains("display_name"))
        patch.display_name = args["display_name"].get<std::string>();
    if (args.contains("email"))
        patch.email = args["email"].get<std::string>();
    if (args.contains("notification_threshold_pm2_5"))
        patch.notification_threshold_pm2_5 = args["notification_threshold_pm2_5"].get<double>();
    if (auto problem = check_patch(patch))
        return ToolResult::error(*problem);
    try {
        const auto updated = profiles.apply(args["user_id"].get<std::string>(), patch);
        return ToolResult::ok({{"profile", to_json(updated)}});
    } catch (const Error& e) {
        return ToolResult::error(e.what());
    }
}

} // namespace

void register_ami_tools(mcp::ToolRegistry& registry, ToolContext ctx)
{
    // Bounds on limit and the field name are enforced by the handlers so that a bad
    // value comes back as a tool error the planner can read, not a protocol error.
    registry.register_tool(
        {"get_recent_sensor_data",
         "Return the most recent air-quality readings (temperature in C, humidity in %RH, co2 in ppm, "
         "pm1_0/pm2_5/pm10 in ug/m3), newest first. limit: 1-100, default 1.",
         {{"type", "object"},
          {"properties",
           {{"limit", {{"type", "integer"}, {"description", "Number of readings to return (1-100)"}, {"default", 1}}}}},
          {"required", json::array()}},
         {}},
        [&readings = ctx.readings](const json& args, const std::string&) {
            return get_recent_sensor_data(readings, args);
        });

    registry.register_tool(
        {"get_sensor_stats",
         "Minimum, maximum and mean of one measurement over an inclusive time range. "
         "field is one of temperature, humidity, co2, pm1_0, pm2_5, pm10.",
         {{"type", "object"},
          {"properties",
           {{"start", {{"type", "string"}, {"description", "Range start, RFC 3339"}}},
            {"end", {{"type", "string"}, {"description", "Range end, RFC 3339"}}},
            {"field", {{"type", "string"}, {"description", "Measurement name"}}}}},
          {"required", {"start", "end", "field"}}},
         {}},
        [&readings = ctx.readings](const json& args, const std::string&) { return get_sensor_stats(readings, args); });

    registry.register_tool(
        {"report_issue",
         "Create an issue ticket for the logged-in user describing a problem with the system or a sensor.",
         {{"type", "object"},
          {"properties",
           {{"description", {{"type", "string"}, {"description", "What is wrong, in the user's words"}}},
            {"user_id", {{"type", "string"}, {"description", "Reporting user"}}}}},
          {"required", {"description", "user_id"}}},
         {"user_id"}},
        [&issues = ctx.issues, &profiles = ctx.profiles](const json& args, const std::string&) {
            return report_issue(issues, profiles, args);
        });

    registry.register_tool(
        {"update_user_profile",
         "Update the logged-in user's profile. Only the fields given are changed.",
         {{"type", "object"},
          {"properties",
           {{"user_id", {{"type", "string"}, {"description", "Profile owner"}}},
            {"display_name", {{"type", "string"}, {"description", "New display name"}}},
            {"email", {{"type", "string"}, {"description", "New e-mail address"}}},
            {"notification_threshold_pm2_5",
             {{"type", "number"}, {"description", "Alert threshold for PM2.5 in ug/m3 (>= 0)"}}}}},
          {"required", {"user_id"}}},
         {"user_id"}},
        [&profiles = ctx.profiles](const json& args, const std::string&) { return update_user_profile(profiles, args); });
}

std::vector<IssueTicket> list_issues(const IssueStore& issues, const std::string& caller)
{
    return issues.list_for(caller);
}

} // namespace ami::tools
