// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/mcp/tool_registry.hpp"
#include "ami/timeseries/reading_store.hpp"
#include "ami/tools/records.hpp"

#include <string>
#include <vector>

namespace ami::tools {

inline constexpr int kMaxRecentLimit = 100;

/// Backing state the tool handlers operate on; must outlive the registry.
struct ToolContext {
    timeseries::ReadingStore& readings;
    IssueStore& issues;
    ProfileStore& profiles;
};

/// get_recent_sensor_data, get_sensor_stats, report_issue, update_user_profile.
void register_ami_tools(mcp::ToolRegistry& registry, ToolContext context);

/// Tickets reported by `caller`, ascending id.
std::vector<IssueTicket> list_issues(const IssueStore& issues, const std::string& caller);

} // namespace ami::tools
