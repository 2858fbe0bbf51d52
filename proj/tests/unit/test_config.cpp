// SPDX-License-Identifier: Apache-2.0
#include "ami/app/config.hpp"
#include "ami/common/error.hpp"
#include "ami/ingest/auth.hpp"
#include "support/fixture.hpp"

#include <doctest.h>

using namespace ami;
using namespace ami::app;

namespace {

std::string error_of(const std::string& text)
{
    try {
        validate(parse_config(text, "/etc/ami"));
    } catch (const Error& e) {
        CHECK(e.code() == Errc::config_invalid);
        return e.what();
    }
    return "";
}

const std::string kUser = "[users.alice]\npassword_hash = \"pbkdf2-sha256$1$00$00\"\n";

} // namespace

TEST_CASE("full config")
{
    const auto cfg = parse_config(R"(# comment
bind_address = "0.0.0.0:9090"
data_dir = "var"
planner_mode = "remote"
remote_endpoint = "https://planner.example/v1/chat/completions"
remote_model = "m1"
remote_key_env = "KEY_VAR"
device_key = "dev \"key\""
static_dir = "/srv/web"
max_rounds = 7

[users.alice]
password_hash = "h1"
display_name = "Alice A"
email = "alice@example.org"
notification_threshold_pm2_5 = 12.5

[users.bob]
password_hash = "h2"
)",
                                  "/etc/ami");
    CHECK(cfg.bind_host == "0.0.0.0");
    CHECK(cfg.bind_port == 9090);
    CHECK(cfg.data_dir == std::filesystem::path("/etc/ami/var"));
    CHECK(cfg.planner_mode == PlannerMode::remote);
    CHECK(cfg.remote_model == "m1");
    CHECK(cfg.remote_key_env == "KEY_VAR");
    CHECK(cfg.device_key == "dev \"key\"");
    CHECK(cfg.static_dir == std::filesystem::path("/srv/web"));
    CHECK(cfg.max_rounds == 7);
    REQUIRE(cfg.users.size() == 2);
    CHECK(cfg.users[0].user_id == "alice");
    CHECK(cfg.users[0].display_name == "Alice A");
    CHECK(cfg.users[0].notification_threshold_pm2_5 == 12.5);
    CHECK(cfg.users[1].display_name == "bob");
    CHECK(cfg.users[1].email == "bob@localhost");
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("errors name the line or the field")
{
    CHECK(error_of("bind_address = \"x\"\n" + kUser).find("config field bind_address") != std::string::npos);
    CHECK(error_of("bind_address = \"h:99999\"\n" + kUser).find("config field bind_address") != std::string::npos);
    CHECK(error_of("\nmax_rounds 5\n").find("config line 2") != std::string::npos);
    CHECK(error_of("max_rounds = 0\n").find("config field max_rounds") != std::string::npos);
    CHECK(error_of("max_rounds = \"5\"\n").find("config field max_rounds") != std::string::npos);
    CHECK(error_of("colour = \"red\"\n").find("unknown key") != std::string::npos);
    CHECK(error_of("a = \"x\"\na = \"y\"\n").find("config line 2") != std::string::npos);
    CHECK(error_of("[servers.x]\n").find("config line 1") != std::string::npos);
    CHECK(error_of("planner_mode = \"magic\"\n").find("config field planner_mode") != std::string::npos);
    CHECK(error_of("data_dir = \"unterminated\n").find("config line 1") != std::string::npos);
    CHECK(error_of("[users.x]\ndisplay_name = \"X\"\n").find("users.x.password_hash") != std::string::npos);
    CHECK(error_of("[users.x]\npassword_hash = \"h\"\nemail = \"nope\"\n").find("users.x.email") != std::string::npos);

    CHECK(error_of("planner_mode = \"scripted\"\n" + kUser).find("scripted_rules_path") != std::string::npos);
    CHECK(error_of("planner_mode = \"remote\"\n" + kUser).find("remote_endpoint") != std::string::npos);
    CHECK(error_of("scripted_rules_path = \"r.txt\"\n").find("config field users") != std::string::npos);
    CHECK(error_of("scripted_rules_path = \"r.txt\"\n" + kUser).empty());
}

TEST_CASE("shipped example loads and its hashes match the documented passwords")
{
    const auto cfg = load_config(testing::source_dir() / "config" / "ami.example.toml");
    CHECK(cfg.bind_port == 8080);
    CHECK(cfg.scripted_rules_path == testing::source_dir() / "config" / "rules.txt");
    REQUIRE(cfg.users.size() == 2);
    CHECK(ingest::verify_password("alice-pass", cfg.users[0].password_hash));
    CHECK(ingest::verify_password("bob-pass", cfg.users[1].password_hash));
    CHECK(!ingest::verify_password("bob-pass", cfg.users[0].password_hash));
    CHECK_THROWS_AS(load_config("/no/such/config.toml"), Error);
}
