// SPDX-License-Identifier: Apache-2.0
#include "ami/tools/records.hpp"

#include "ami/common/error.hpp"

namespace ami::tools {

using nlohmann::json;

namespace {

std::string_view status_name(IssueStatus s)
{
    return s == IssueStatus::open ? "open" : "closed";
}

IssueStatus parse_status(const std::string& s)
{
    if (s == "open")
        return IssueStatus::open;
    if (s == "closed")
        return IssueStatus::closed;
    throw Error(Errc::parse_error, "unknown issue status " + s);
}

} // namespace

json to_json(const IssueTicket& t)
{
    return {
        {"id", t.id},
        {"reporter_user_id", t.reporter_user_id},
        {"description", t.description},
        {"status", status_name(t.status)},
        {"created_at", format_rfc3339(t.created_at)},
    };
}

IssueStore::IssueStore(Clock clock, const std::optional<std::filesystem::path>& log_path) : clock_(std::move(clock))
{
    if (!log_path)
        return;
    log_ = std::make_unique<AppendLog>(*log_path, [this](const json& rec, std::size_t) {
        const auto& event = rec.at("event").get_ref<const std::string&>();
        if (event == "create") {
            const auto& t = rec.at("ticket");
            IssueTicket ticket;
            ticket.id = t.at("id").get<std::int64_t>();
            if (ticket.id != static_cast<std::int64_t>(tickets_.size()) + 1)
                throw Error(Errc::storage_failure, "issue ids out of sequence");
            ticket.reporter_user_id = t.at("reporter_user_id").get<std::string>();
            ticket.description = t.at("description").get<std::string>();
            ticket.status = parse_status(t.at("status").get<std::string>());
            const auto ts = parse_rfc3339(t.at("created_at").get<std::string>());
            if (!ts)
                throw Error(Errc::storage_failure, "bad created_at");
            ticket.created_at = *ts;
            tickets_.push_back(std::move(ticket));
        } else if (event == "status") {
            const auto id = rec.at("id").get<std::int64_t>();
            if (id < 1 || id > static_cast<std::int64_t>(tickets_.size()))
                throw Error(Errc::storage_failure, "status change for unknown issue");
            tickets_[static_cast<std::size_t>(id - 1)].status = parse_status(rec.at("status").get<std::string>());
        } else {
            throw Error(Errc::storage_failure, "unknown issue event " + event);
        }
    });
}

IssueTicket IssueStore::create(const std::string& reporter, const std::string& description)
{
    std::lock_guard lock(mutex_);
    IssueTicket ticket{static_cast<std::int64_t>(tickets_.size()) + 1, reporter, description, IssueStatus::open,
                       clock_()};
    if (log_)
        log_->append({{"event", "create"}, {"ticket", to_json(ticket)}});
    tickets_.push_back(ticket);
    return ticket;
}

void IssueStore::set_status(std::int64_t id, IssueStatus status)
{
    std::lock_guard lock(mutex_);
    if (id < 1 || id > static_cast<std::int64_t>(tickets_.size()))
        throw Error(Errc::invalid_argument, "no issue #" + std::to_string(id));
    if (log_)
        log_->append({{"event", "status"}, {"id", id}, {"status", status_name(status)}});
    tickets_[static_cast<std::size_t>(id - 1)].status = status;
}

std::optional<IssueTicket> IssueStore::find(std::int64_t id) const
{
    std::lock_guard lock(mutex_);
    if (id < 1 || id > static_cast<std::int64_t>(tickets_.size()))
        return std::nullopt;
    return tickets_[static_cast<std::size_t>(id - 1)];
}

std::vector<IssueTicket> IssueStore::list_for(std::string_view reporter) const
{
    std::lock_guard lock(mutex_);
    std::vector<IssueTicket> out;
    for (const auto& t : tickets_)
        if (t.reporter_user_id == reporter)
            out.push_back(t);
    return out;
}

std::size_t IssueStore::size() const
{
    std::lock_guard lock(mutex_);
    return tickets_.size();
}

// --- profiles ---

json to_json(const UserProfile& p)
{
    json j = {
        {"user_id", p.user_id},
        {"display_name", p.display_name},
        {"email", p.email},
        {"notification_threshold_pm2_5", nullptr},
    };
    if (p.notification_threshold_pm2_5)
        j["notification_threshold_pm2_5"] = *p.notification_threshold_pm2_5;
    return j;
}

UserProfile profile_from_json(const json& j)
{
    UserProfile p;
    p.user_id = j.at("user_id").get<std::string>();
    p.display_name = j.at("display_name").get<std::string>();
    p.email = j.at("email").get<std::string>();
    if (const auto t = j.find("notification_threshold_pm2_5"); t != j.end() && !t->is_null())
        p.notification_threshold_pm2_5 = t->get<double>();
    return p;
}

std::optional<std::string> check_patch(const ProfilePatch& patch)
{
    if (patch.empty())
        return "provide at least one of display_name, email, notification_threshold_pm2_5";
    if (patch.email && patch.email->find('@') == std::string::npos)
        return "email must contain \"@\"";
    if (patch.notification_threshold_pm2_5
        && !(*patch.notification_threshold_pm2_5 >= 0 && *patch.notification_threshold_pm2_5 < 1e300))
        return "notification_threshold_pm2_5 must be a non-negative number";
    return std::nullopt;
}

ProfileStore::ProfileStore(const std::optional<std::filesystem::path>& log_path)
{
    if (!log_path)
        return;
    log_ = std::make_unique<AppendLog>(*log_path, [this](const json& rec, std::size_t) {
        auto p = profile_from_json(rec.at("profile"));
        auto name = p.user_id;
        profiles_[std::move(name)] = std::move(p);
    });
}

void ProfileStore::seed(const UserProfile& profile)
{
    std::lock_guard lock(mutex_);
    if (profiles_.count(profile.user_id))
        return;
    if (log_)
        log_->append({{"profile", to_json(profile)}});
    profiles_[profile.user_id] = profile;
}

bool ProfileStore::contains(std::string_view user_id) const
{
    std::lock_guard lock(mutex_);
    return profiles_.find(user_id) != profiles_.end();
}

std::optional<UserProfile> ProfileStore::get(std::string_view user_id) const
{
    std::lock_guard lock(mutex_);
    const auto it = profiles_.find(user_id);
    if (it == profiles_.end())
        return std::nullopt;
    return it->second;
}

UserProfile ProfileStore::apply(const std::string& user_id, const ProfilePatch& patch)
{
    if (auto problem = check_patch(patch))
        throw Error(Errc::invalid_argument, *problem);
    std::lock_guard lock(mutex_);
    const auto it = profiles_.find(user_id);
    if (it == profiles_.end())
        throw Error(Errc::unknown_user, "unknown user " + user_id);
    UserProfile updated = it->second;
    if (patch.display_name)
        updated.display_name = *patch.display_name;
    if (patch.email)
        updated.email = *patch.email;
    if (patch.notification_threshold_pm2_5)
        updated.notification_threshold_pm2_5 = patch.notification_threshold_pm2_5;
    if (log_)
        log_->append({{"profile", to_json(updated)}});
    it->second = updated;
    return updated;
}

} // namespace ami::tools
