// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ami::app {

enum class PlannerMode { scripted, remote };

struct SeedUser {
    std::string user_id;
    std::string password_hash;
    std::string display_name;
    std::string email;
    std::optional<double> notification_threshold_pm2_5;
};

struct Config {
    std::string bind_host = "127.0.0.1";
    int bind_port = 8080;
    std::optional<std::filesystem::path> data_dir; // in-memory when unset
    PlannerMode planner_mode = PlannerMode::scripted;
    std::optional<std::filesystem::path> scripted_rules_path;
    std::string remote_endpoint;
    std::string remote_model;
    std::string remote_key_env;
    std::optional<std::string> device_key;
    std::optional<std::filesystem::path> static_dir;
    int max_rounds = 5;
    std::vector<SeedUser> users;
};

/// Flat TOML subset:
///
///     bind_address = "127.0.0.1:8080"
///     data_dir = "var"                  # relative paths resolve against `base_dir`
///     planner_mode = "scripted"         # or "remote"
///     scripted_rules_path = "rules.txt"
///     remote_endpoint = "https://api.example.com/v1/chat/completions"
///     remote_model = "some-model"
///     remote_key_env = "AMI_PLANNER_KEY"
///     device_key = "..."
///     static_dir = "web"
///     max_rounds = 5
///
///     [users.alice]
///     password_hash = "pbkdf2-sha256$..."
///     display_name = "Alice"
///     email = "alice@example.org"
///     notification_threshold_pm2_5 = 25
///
/// Values are double-quoted strings (with \" \\ \n \t escapes), integers or decimals.
/// Throws Error(config_invalid) naming the line or the offending field.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads and parses `path`; relative paths inside resolve against its directory.
Config load_config(const std::filesystem::path& path);

/// Cross-field checks: scripted needs a rules path, remote needs endpoint and model,
/// at least one user. Throws Error(config_invalid) naming the field.
void validate(const Config& config);

} // namespace ami::app
