// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/common/append_log.hpp"
#include "ami/common/time.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ami::tools {

enum class IssueStatus { open, closed };

struct IssueTicket {
    std::int64_t id = 0;
    std::string reporter_user_id;
    std::string description;
    IssueStatus status = IssueStatus::open;
    Timestamp created_at{};

    friend bool operator==(const IssueTicket&, const IssueTicket&) = default;
};

nlohmann::json to_json(const IssueTicket& ticket);

/// Tickets numbered 1, 2, ... with no gaps; allocation and append happen under one lock.
class IssueStore {
public:
    explicit IssueStore(Clock clock = system_now, const std::optional<std::filesystem::path>& log_path = std::nullopt);

    IssueTicket create(const std::string& reporter, const std::string& description);
    /// Throws Error(invalid_argument) for an unknown id.
    void set_status(std::int64_t id, IssueStatus status);

    std::optional<IssueTicket> find(std::int64_t id) const;
    /// Ascending id.
    std::vector<IssueTicket> list_for(std::string_view reporter) const;
    std::size_t size() const;

private:
    Clock clock_;
    mutable std::mutex mutex_;
    std::vector<IssueTicket> tickets_; // index = id - 1
    std::unique_ptr<AppendLog> log_;
};

struct UserProfile {
    std::string user_id;
    std::string display_name;
    std::string email;
    std::optional<double> notification_threshold_pm2_5; // µg/m³

    friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct ProfilePatch {
    std::optional<std::string> display_name;
    std::optional<std::string> email;
    std::optional<double> notification_threshold_pm2_5;

    bool empty() const noexcept { return !display_name && !email && !notification_threshold_pm2_5; }
};

nlohmann::json to_json(const UserProfile& profile);
UserProfile profile_from_json(const nlohmann::json& j);

/// Returns a message describing why `patch` is unacceptable, or nullopt.
std::optional<std::string> check_patch(const ProfilePatch& patch);

/// One profile per known user. Snapshots are appended to the log on every change and
/// the last snapshot per user wins on replay.
class ProfileStore {
public:
    explicit ProfileStore(const std::optional<std::filesystem::path>& log_path = std::nullopt);

    /// Adds the profile unless the user already has one (replayed state wins over seeds).
    void seed(const UserProfile& profile);

    bool contains(std::string_view user_id) const;
    std::optional<UserProfile> get(std::string_view user_id) const;

    /// Throws Error(unknown_user) or Error(invalid_argument) (profile untouched on error).
    UserProfile apply(const std::string& user_id, const ProfilePatch& patch);

private:
    mutable std::mutex mutex_;
    std::map<std::string, UserProfile, std::less<>> profiles_;
    std::unique_ptr<AppendLog> log_;
};

} // namespace ami::tools
