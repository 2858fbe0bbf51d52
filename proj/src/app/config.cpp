// SPDX-License-Identifier: Apache-2.0
#include "ami/app/config.hpp"

#include "ami/common/error.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace ami::app {

namespace {

using Value = std::variant<std::string, std::int64_t, double>;

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] void fail_line(std::size_t line, const std::string& msg)
{
    throw Error(Errc::config_invalid, "config line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void fail_field(const std::string& field, const std::string& msg)
{
    throw Error(Errc::config_invalid, "config field " + field + ": " + msg);
}

bool is_bare_key(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

/// Parses the value part of `key = value`, dropping a trailing comment.
Value parse_value(std::string_view raw, std::size_t line)
{
    raw = trim(raw);
    if (raw.empty())
        fail_line(line, "missing value");

    if (raw.front() == '"') {
        std::string out;
        std::size_t i = 1;
        for (; i < raw.size(); ++i) {
            const char c = raw[i];
            if (c == '"')
                break;
            if (c == '\\') {
                if (++i >= raw.size())
                    fail_line(line, "unterminated escape");
                switch (raw[i]) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: fail_line(line, std::string("unsupported escape \\") + raw[i]);
                }
                continue;
            }
            out += c;
        }
        if (i >= raw.size())
            fail_line(line, "unterminated string");
        const auto rest = trim(raw.substr(i + 1));
        if (!rest.empty() && rest.front() != '#')
            fail_line(line, "unexpected text after string");
        return out;
    }

    const auto hash = raw.find('#');
    const auto token = trim(raw.substr(0, hash));
    std::int64_t integer = 0;
    {
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), integer);
        if (ec == std::errc{} && ptr == token.data() + token.size())
            return integer;
    }
    double number = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
    if (ec == std::errc{} && ptr == token.data() + token.size())
        return number;
    fail_line(line, "expected a quoted string or a number, got '" + std::string(token) + "'");
}

struct Entry {
    Value value;
    std::size_t line;
};

std::string as_string(const std::string& field, const Entry& e)
{
    if (const auto* s = std::get_if<std::string>(&e.value))
        return *s;
    fail_field(field, "expected a string (line " + std::to_string(e.line) + ")");
}

std::int64_t as_int(const std::string& field, const Entry& e)
{
    if (const auto* i = std::get_if<std::int64_t>(&e.value))
        return *i;
    fail_field(field, "expected an integer (line " + std::to_string(e.line) + ")");
}

double as_number(const std::string& field, const Entry& e)
{
    if (const auto* i = std::get_if<std::int64_t>(&e.value))
        return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&e.value))
        return *d;
    fail_field(field, "expected a number (line " + std::to_string(e.line) + ")");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty())
        return base / path;
    return path;
}

} // namespace

Config parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    std::map<std::string, Entry> top;
    std::map<std::string, std::map<std::string, Entry>> users;
    std::vector<std::string> user_order;
    std::string section;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;

        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string_view::npos)
                fail_line(line_no, "unterminated section header");
            const auto rest = trim(line.substr(close + 1));
            if (!rest.empty() && rest.front() != '#')
                fail_line(line_no, "unexpected text after section header");
            const auto name = trim(line.substr(1, close - 1));
            if (!name.starts_with("users.") || !is_bare_key(name.substr(6)))
                fail_line(line_no, "unknown section [" + std::string(name) + "], expected [users.NAME]");
            section = std::string(name.substr(6));
            if (users.contains(section))
                fail_line(line_no, "duplicate section [users." + section + "]");
            users[section];
            user_order.push_back(section);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail_line(line_no, "expected key = value");
        const auto key = std::string(trim(line.substr(0, eq)));
        if (!is_bare_key(key))
            fail_line(line_no, "invalid key '" + key + "'");
        auto& table = section.empty() ? top : users[section];
        if (table.contains(key))
            fail_line(line_no, "duplicate key '" + key + "'");
        table.emplace(key, Entry{parse_value(line.substr(eq + 1), line_no), line_no});
    }

    Config cfg;
    for (const auto& [key, entry] : top) {
        if (key == "bind_address") {
            const auto addr = as_string(key, entry);
            const auto colon = addr.rfind(':');
            if (colon == std::string::npos || colon == 0)
                fail_field(key, "expected host:port, got '" + addr + "'");
            cfg.bind_host = addr.substr(0, colon);
            int port = -1;
            const auto ps = std::string_view(addr).substr(colon + 1);
            const auto [ptr, ec] = std::from_chars(ps.data(), ps.data() + ps.size(), port);
            if (ps.empty() || ec != std::errc{} || ptr != ps.data() + ps.size() || port < 0 || port > 65535)
                fail_field(key, "invalid port in '" + addr + "'");
            cfg.bind_port = port;
        } else if (key == "data_dir") {
            cfg.data_dir = resolve(base_dir, as_string(key, entry));
        } else if (key == "planner_mode") {
            const auto mode = as_string(key, entry);
            if (mode == "scripted")
                cfg.planner_mode = PlannerMode::scripted;
            else if (mode == "remote")
                cfg.planner_mode = PlannerMode::remote;
            else
                fail_field(key, "expected \"scripted\" or \"remote\", got '" + mode + "'");
        } else if (key == "scripted_rules_path") {
            cfg.scripted_rules_path = resolve(base_dir, as_string(key, entry));
        } else if (key == "remote_endpoint") {
            cfg.remote_endpoint = as_string(key, entry);
        } else if (key == "remote_model") {
            cfg.remote_model = as_string(key, entry);
        } else if (key == "remote_key_env") {
            cfg.remote_key_env = as_string(key, entry);
        } else if (key == "device_key") {
            cfg.device_key = as_string(key, entry);
        } else if (key == "static_dir") {
            cfg.static_dir = resolve(base_dir, as_string(key, entry));
        } else if (key == "max_rounds") {
            const auto rounds = as_int(key, entry);
            if (rounds < 1 || rounds > 100)
                fail_field(key, "must be between 1 and 100");
            cfg.max_rounds = static_cast<int>(rounds);
        } else {
            fail_field(key, "unknown key (line " + std::to_string(entry.line) + ")");
        }
    }

    for (const auto& name : user_order) {
        const auto& table = users[name];
        SeedUser u;
        u.user_id = name;
        u.display_name = name;
        for (const auto& [key, entry] : table) {
            const auto field = "users." + name + "." + key;
            if (key == "password_hash")
                u.password_hash = as_string(field, entry);
            else if (key == "display_name")
                u.display_name = as_string(field, entry);
            else if (key == "email")
                u.email = as_string(field, entry);
            else if (key == "notification_threshold_pm2_5")
                u.notification_threshold_pm2_5 = as_number(field, entry);
            else
                fail_field(field, "unknown key (line " + std::to_string(entry.line) + ")");
        }
        if (u.password_hash.empty())
            fail_field("users." + name + ".password_hash", "required");
        if (u.email.empty())
            u.email = name + "@localhost";
        if (u.email.find('@') == std::string::npos)
            fail_field("users." + name + ".email", "must contain '@'");
        if (u.notification_threshold_pm2_5 && !(*u.notification_threshold_pm2_5 >= 0))
            fail_field("users." + name + ".notification_threshold_pm2_5", "must be non-negative");
        cfg.users.push_back(std::move(u));
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::config_invalid, "cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    auto cfg = parse_config(ss.str(), path.parent_path());
    validate(cfg);
    return cfg;
}

void validate(const Config& config)
{
    if (config.planner_mode == PlannerMode::scripted && !config.scripted_rules_path)
        fail_field("scripted_rules_path", "required when planner_mode is \"scripted\"");
    if (config.planner_mode == PlannerMode::remote) {
        if (config.remote_endpoint.empty())
            fail_field("remote_endpoint", "required when planner_mode is \"remote\"");
        if (config.remote_model.empty())
            fail_field("remote_model", "required when planner_mode is \"remote\"");
    }
    if (config.users.empty())
        fail_field("users", "at least one [users.NAME] section is required");
}

} // namespace ami::app
