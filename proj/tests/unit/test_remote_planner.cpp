// SPDX-License-Identifier: Apache-2.0
#include "ami/agent/remote_planner.hpp"
#include "ami/common/error.hpp"

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <thread>

using namespace ami;
using namespace ami::agent;
using nlohmann::json;

namespace {

/// Local chat-completions stand-in answering from a status script.
class FakeEndpoint {
public:
    explicit FakeEndpoint(std::vector<std::pair<int, std::string>> script) : script_(std::move(script))
    {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            last_body = req.body;
            last_auth = req.get_header_value("Authorization");
            const auto i = std::min<std::size_t>(hits++, script_.size() - 1);
            res.status = script_[i].first;
            res.set_content(script_[i].second, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint()
    {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

    std::atomic<int> hits{0};
    std::string last_body, last_auth;

private:
    std::vector<std::pair<int, std::string>> script_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

const std::string kReply = R"({"choices":[{"message":{"role":"assistant","content":"It is 21.5 C."}}]})";

RemotePlanner planner_for(const std::string& url, std::vector<std::chrono::milliseconds>* sleeps)
{
    RemotePlannerOptions o;
    o.endpoint = url;
    o.model = "test-model";
    o.api_key = "k123";
    o.timeout = std::chrono::seconds(5);
    return RemotePlanner(o, [sleeps](std::chrono::milliseconds d) { sleeps->push_back(d); });
}

const std::vector<ChatMessage> kMessages{ChatMessage::system("s"), ChatMessage::user("hi")};

Errc failure(const RemotePlanner& p)
{
    try {
        p.decide(kMessages, {});
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected failure");
    return Errc::invalid_argument;
}

} // namespace

TEST_CASE("request body")
{
    const std::vector<ChatMessage> msgs{
        ChatMessage::system("s"),
        ChatMessage::user("u"),
        ChatMessage::assistant("", {{"call_1", "get_recent_sensor_data", {{"limit", 1}}}}),
        ChatMessage::tool("call_1", "{}"),
    };
    const std::vector<openapi::PlannerToolSpec> tools{{"get_recent_sensor_data", "recent", {{"type", "object"}}}};
    const auto body = build_chat_request("m", msgs, tools);
    CHECK(body["model"] == "m");
    CHECK(body["messages"][0] == json{{"role", "system"}, {"content", "s"}});
    CHECK(body["messages"][2]["content"].is_null());
    CHECK(body["messages"][2]["tool_calls"][0]["function"]["arguments"] == "{\"limit\":1}");
    CHECK(body["messages"][3]["tool_call_id"] == "call_1");
    CHECK(body["tools"][0]["function"]["name"] == "get_recent_sensor_data");
    CHECK(body["tool_choice"] == "auto");
    CHECK(!build_chat_request("m", msgs, {}).contains("tools"));
}

TEST_CASE("response parsing")
{
    CHECK(parse_chat_response(json::parse(kReply)).text() == "It is 21.5 C.");
    const auto calls = parse_chat_response(json::parse(
        R"({"choices":[{"message":{"content":null,"tool_calls":[{"id":"x","type":"function","function":{"name":"report_issue","arguments":"{\"description\":\"d\"}"}}]}}]})"));
    REQUIRE(!calls.is_final());
    CHECK(calls.calls()[0].tool_name == "report_issue");
    CHECK(calls.calls()[0].args == json{{"description", "d"}});

    for (const char* bad : {
             R"({})",
             R"({"choices":[]})",
             R"({"choices":[{}]})",
             R"({"choices":[{"message":{"content":null}}]})",
             R"({"choices":[{"message":{"tool_calls":[{"function":{}}]}}]})",
             R"({"choices":[{"message":{"tool_calls":[{"function":{"name":"t","arguments":"[1]"}}]}}]})",
             R"({"choices":[{"message":{"tool_calls":[{"function":{"name":"t","arguments":"{oops"}}]}}]})",
         }) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_chat_response(json::parse(bad)), Error);
    }
}

TEST_CASE("configuration errors")
{
    CHECK_THROWS_AS(RemotePlanner({"ftp://x", "", "m"}), Error);
    CHECK_THROWS_AS(RemotePlanner({"not a url", "", "m"}), Error);
    CHECK_THROWS_AS(RemotePlanner({"http://localhost:1/v1/chat/completions", "", ""}), Error);
    CHECK_NOTHROW(RemotePlanner({"http://localhost:1", "", "m"}));
}

TEST_CASE("success sends the model, bearer key and tools")
{
    FakeEndpoint ep({{200, kReply}});
    std::vector<std::chrono::milliseconds> sleeps;
    const auto p = planner_for(ep.url(), &sleeps);
    CHECK(p.decide(kMessages, {}).text() == "It is 21.5 C.");
    CHECK(ep.hits == 1);
    CHECK(ep.last_auth == "Bearer k123");
    CHECK(json::parse(ep.last_body)["model"] == "test-model");
    CHECK(sleeps.empty());
}

TEST_CASE("5xx is retried three times with doubling backoff, then unreachable")
{
    FakeEndpoint ep({{500, "{}"}});
    std::vector<std::chrono::milliseconds> sleeps;
    CHECK(failure(planner_for(ep.url(), &sleeps)) == Errc::planner_unreachable);
    CHECK(ep.hits == 3);
    CHECK(sleeps == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(500), std::chrono::milliseconds(1000)});
}

TEST_CASE("429 then success")
{
    FakeEndpoint ep({{429, "{}"}, {200, kReply}});
    std::vector<std::chrono::milliseconds> sleeps;
    CHECK(planner_for(ep.url(), &sleeps).decide(kMessages, {}).text() == "It is 21.5 C.");
    CHECK(ep.hits == 2);
    CHECK(sleeps.size() == 1);
}

TEST_CASE("4xx fails at once")
{
    FakeEndpoint ep({{400, "{}"}});
    std::vector<std::chrono::milliseconds> sleeps;
    CHECK(failure(planner_for(ep.url(), &sleeps)) == Errc::planner_unreachable);
    CHECK(ep.hits == 1);
}

TEST_CASE("garbage body is a malformed response, not retried")
{
    FakeEndpoint ep({{200, "<html>"}, {200, R"({"choices":[]})"}});
    std::vector<std::chrono::milliseconds> sleeps;
    const auto p = planner_for(ep.url(), &sleeps);
    CHECK(failure(p) == Errc::malformed_response);
    CHECK(failure(p) == Errc::malformed_response);
    CHECK(ep.hits == 2);
}

TEST_CASE("connection refused is retried, then unreachable")
{
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    std::vector<std::chrono::milliseconds> sleeps;
    CHECK(failure(planner_for("http://127.0.0.1:" + std::to_string(port), &sleeps)) == Errc::planner_unreachable);
    CHECK(sleeps.size() == 2);
}
