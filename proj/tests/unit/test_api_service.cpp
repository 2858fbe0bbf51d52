// SPDX-License-Identifier: Apache-2.0
#include "support/fixture.hpp"
#include "support/planners.hpp"

#include <doctest.h>

using namespace ami;
using nlohmann::json;

namespace {

const std::string kReading =
    R"({"device_id":"s1","captured_at":"2025-01-01T00:00:00Z","temperature":21.5,"humidity":40,"co2":600,"pm1_0":3,"pm2_5":8,"pm10":12})";

json body_of(const ingest::HttpResponse& r)
{
    return json::parse(r.body);
}

} // namespace

TEST_CASE("sensor ingestion")
{
    testing::ApiFixture fx;
    auto ok = fx.call("POST", "/sensor_data/", kReading);
    CHECK(ok.status == 201);
    CHECK(body_of(ok) == json{{"stored_id", 1}, {"warnings", json::array()}});
    CHECK(fx.call("POST", "/sensor_data", kReading).status == 201);
    CHECK(fx.readings.size() == 2);

    auto warn = json::parse(kReading);
    warn["pm1_0"] = 50;
    const auto w = fx.call("POST", "/sensor_data/", warn.dump());
    CHECK(w.status == 201);
    CHECK(!body_of(w)["warnings"].empty());

    auto bad = json::parse(kReading);
    bad["humidity"] = 140;
    const auto r = fx.call("POST", "/sensor_data/", bad.dump());
    CHECK(r.status == 400);
    CHECK(body_of(r)["error"] == "invalid-reading");
    CHECK(body_of(r)["field"] == "humidity");

    const auto garbage = fx.call("POST", "/sensor_data/", "{nope");
    CHECK(garbage.status == 400);
    CHECK(body_of(garbage)["field"] == "body");

    CHECK(fx.call("POST", "/sensor_data/", kReading, "", {}, "text/plain").status == 415);
    CHECK(fx.call("POST", "/sensor_data/", kReading, "", {}, "").status == 415);
    CHECK(fx.call("POST", "/sensor_data/", kReading, "", {}, "Application/JSON; charset=utf-8").status == 201);
    CHECK(fx.call("GET", "/sensor_data/").status == 405);
    CHECK(fx.readings.size() == 4);
}

TEST_CASE("device key gate")
{
    testing::ApiFixture fx(nullptr, {}, std::string("dev-secret"));
    CHECK(fx.call("POST", "/sensor_data/", kReading).status == 401);

    ingest::HttpRequest req{"POST", "/sensor_data/", {{"content-type", "application/json"}, {"x-device-key", "dev-secret"}}, {}, kReading};
    CHECK(fx.api->handle(req).status == 201);
    req.headers["x-device-key"] = "wrong";
    CHECK(fx.api->handle(req).status == 401);
    CHECK(fx.call("POST", "/sensor_data/", kReading, fx.token_for("alice")).status == 201);
    CHECK(fx.readings.size() == 2);
}

TEST_CASE("login, sessions and logout")
{
    testing::ApiFixture fx;
    CHECK(fx.call("POST", "/api/login", R"({"username":"alice","password":"nope"})").status == 401);
    CHECK(fx.call("POST", "/api/login", R"({"username":"mallory","password":"x"})").status == 401);
    CHECK(fx.call("POST", "/api/login", R"({"username":"alice"})").status == 400);
    CHECK(fx.call("GET", "/api/login").status == 405);

    const auto ok = fx.call("POST", "/api/login", R"({"username":"alice","password":"alice-pass"})");
    REQUIRE(ok.status == 200);
    const auto token = body_of(ok)["token"].get<std::string>();
    CHECK(token.size() == 64);
    CHECK(body_of(ok)["user_id"] == "alice");
    CHECK(body_of(ok)["expires_at"] == "2025-01-02T12:00:00Z");

    CHECK(fx.call("GET", "/api/profile", "", token).status == 200);
    CHECK(fx.call("GET", "/api/profile").status == 401);
    CHECK(fx.call("GET", "/api/profile", "", "not-a-token").status == 401);

    fx.time.advance(std::chrono::hours(24));
    CHECK(fx.call("GET", "/api/profile", "", token).status == 401);

    const auto t2 = fx.token_for("bob");
    CHECK(fx.call("POST", "/api/logout", "", t2).status == 200);
    CHECK(fx.call("GET", "/api/profile", "", t2).status == 401);
}

TEST_CASE("routing")
{
    testing::ApiFixture fx;
    const auto t = fx.token_for("alice");
    CHECK(fx.call("GET", "/api/nothing", "", t).status == 404);
    CHECK(fx.call("DELETE", "/api/profile", "", t).status == 405);
    CHECK(fx.call("GET", "/api/chat", "", t).status == 405);
    const auto doc = fx.call("GET", "/api/openapi.json");
    CHECK(doc.status == 200);
    CHECK(body_of(doc)["paths"].size() == 4);
    for (const char* p : {"/api/chat/history", "/api/readings/recent", "/api/issues", "/api/export.csv"})
        CHECK(fx.call("GET", p).status == 401);
}

TEST_CASE("reading queries mirror the store")
{
    testing::ApiFixture fx;
    fx.seed_simulated();
    const auto t = fx.token_for("alice");

    const auto recent = fx.call("GET", "/api/readings/recent", "", t, {{"limit", "2"}});
    REQUIRE(recent.status == 200);
    CHECK(body_of(recent) == timeseries::to_json(fx.readings.query_recent(2)));
    CHECK(body_of(fx.call("GET", "/api/readings/recent", "", t)).size() == 6);
    for (const char* bad : {"0", "-1", "x", "", "2x"})
        CHECK(fx.call("GET", "/api/readings/recent", "", t, {{"limit", bad}}).status == 400);

    const auto range = fx.call("GET", "/api/readings/range", "", t,
                               {{"start", "2025-01-01T10:00:00Z"}, {"end", "2025-01-01T10:01:00Z"}});
    REQUIRE(range.status == 200);
    CHECK(body_of(range).size() == 4);
    CHECK(fx.call("GET", "/api/readings/range", "", t, {{"start", "soon"}}).status == 400);

    const auto agg = fx.call("GET", "/api/readings/aggregate", "", t, {{"field", "co2"}});
    REQUIRE(agg.status == 200);
    CHECK(body_of(agg)["count"] == 6);
    CHECK(body_of(agg) == timeseries::to_json(fx.readings.aggregate(timeseries::TimeRange::everything(), "co2")));
    CHECK(fx.call("GET", "/api/readings/aggregate", "", t, {{"field", "ozone"}}).status == 400);
    CHECK(fx.call("GET", "/api/readings/aggregate", "", t).status == 400);

    const auto csv = fx.call("GET", "/api/export.csv", "", t);
    CHECK(csv.status == 200);
    CHECK(csv.content_type == "text/csv");
    CHECK(csv.body == fx.readings.export_csv(timeseries::TimeRange::everything()));
}

TEST_CASE("profile and issues are scoped to the session")
{
    testing::ApiFixture fx;
    const auto alice = fx.token_for("alice");
    const auto bob = fx.token_for("bob");

    const auto put = fx.call("PUT", "/api/profile", R"({"user_id":"bob","display_name":"Not Bob"})", alice);
    REQUIRE(put.status == 200);
    CHECK(body_of(put)["user_id"] == "alice");
    CHECK(fx.profiles.get("alice")->display_name == "Not Bob");
    CHECK(fx.profiles.get("bob")->display_name == "bob");
    CHECK(fx.call("PUT", "/api/profile", R"({"email":"nope"})", alice).status == 400);
    CHECK(fx.call("PUT", "/api/profile", R"({})", alice).status == 400);
    CHECK(fx.call("PUT", "/api/profile", "[1]", alice).status == 400);
    CHECK(body_of(fx.call("GET", "/api/profile", "", bob))["display_name"] == "bob");

    fx.issues.create("alice", "one");
    fx.issues.create("bob", "two");
    const auto mine = body_of(fx.call("GET", "/api/issues", "", bob));
    REQUIRE(mine.size() == 1);
    CHECK(mine[0]["id"] == 2);
}

TEST_CASE("chat with the shipped rules")
{
    testing::ApiFixture fx;
    fx.seed_simulated();
    const auto t = fx.token_for("alice");
    const auto r = fx.call("POST", "/api/chat", R"({"message":"The sensor in room 2 is stuck"})", t);
    REQUIRE(r.status == 200);
    const auto b = body_of(r);
    CHECK(b["reply"] == "I have reported this as issue #1. Our team will look into it.");
    REQUIRE(b["tool_calls"].size() == 1);
    CHECK(b["tool_calls"][0]["name"] == "report_issue");
    CHECK(b["tool_calls"][0]["id"] == "call_1");
    CHECK(b["tool_calls"][0]["args"]["user_id"] == "alice");
    CHECK(b["tool_calls"][0]["is_error"] == false);
    CHECK(fx.issues.find(1)->reporter_user_id == "alice");

    const auto fallback = body_of(fx.call("POST", "/api/chat", R"({"message":"tell me a joke"})", t));
    CHECK(fallback["reply"] == agent::ScriptedPlanner::kFallbackText);
    CHECK(fallback["tool_calls"].empty());

    CHECK(fx.call("POST", "/api/chat", R"({"message":"   "})", t).status == 400);
    CHECK(fx.call("POST", "/api/chat", R"({"text":"hi"})", t).status == 400);

    const auto history = body_of(fx.call("GET", "/api/chat/history", "", t));
    CHECK(history["user_id"] == "alice");
    CHECK(history["messages"].size() == 6);
    CHECK(history["messages"][0] == json{{"role", "user"}, {"text", "The sensor in room 2 is stuck"}});
    CHECK(body_of(fx.call("GET", "/api/chat/history", "", fx.token_for("bob")))["messages"].empty());
}

TEST_CASE("chat failures map to 409 and 502")
{
    {
        testing::ApiFixture fx(std::make_unique<testing::AlwaysCallPlanner>(), {3, 50});
        const auto r = fx.call("POST", "/api/chat", R"({"message":"loop"})", fx.token_for("alice"));
        CHECK(r.status == 409);
        CHECK(body_of(r)["error"] == "agent-loop-exceeded");
        CHECK(body_of(r)["tool_calls"].size() == 3);
    }
    {
        testing::ApiFixture fx(std::make_unique<testing::FailingPlanner>(Errc::planner_unreachable));
        const auto r = fx.call("POST", "/api/chat", R"({"message":"hi"})", fx.token_for("alice"));
        CHECK(r.status == 502);
        CHECK(body_of(r)["error"] == "planner-unreachable");
    }
}

TEST_CASE("mcp endpoint status mapping")
{
    testing::ApiFixture fx;
    const auto t = fx.token_for("alice");
    CHECK(fx.call("POST", "/mcp", R"({"jsonrpc":"2.0","id":1,"method":"ping"})", t).status == 200);
    CHECK(fx.call("POST", "/mcp", R"({"jsonrpc":"2.0","id":1,"method":"nope"})", t).status == 200);
    CHECK(fx.call("POST", "/mcp", "{", t).status == 400);
    CHECK(fx.call("POST", "/mcp", "[]", t).status == 400);
    const auto note = fx.call("POST", "/mcp", R"({"jsonrpc":"2.0","method":"ping"})", t);
    CHECK(note.status == 202);
    CHECK(note.body.empty());
    CHECK(fx.call("POST", "/mcp", R"({"jsonrpc":"2.0","id":1,"method":"ping"})").status == 401);
}
