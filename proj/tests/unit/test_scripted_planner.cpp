// SPDX-License-Identifier: Apache-2.0
#include "ami/agent/scripted_planner.hpp"
#include "ami/common/error.hpp"
#include "support/fixture.hpp"

#include <doctest.h>

using namespace ami;
using namespace ami::agent;
using nlohmann::json;

namespace {

std::string parse_error(const std::string& rules)
{
    try {
        ScriptedPlanner::parse(rules);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::malformed_rules);
        return e.what();
    }
    return "";
}

std::vector<ChatMessage> turn(const std::string& text)
{
    return {ChatMessage::system("sys"), ChatMessage::user(text)};
}

} // namespace

TEST_CASE("rule file errors name the line")
{
    CHECK(parse_error("# ok\n\nmatch \"a\" => say \"x\"\nmatch \"b\"\n").find("rules line 4") != std::string::npos);
    CHECK(parse_error("hello").find("rules line 1: expected 'match'") != std::string::npos);
    CHECK(parse_error("match /a/g => say \"x\"").find("unsupported regex flags") != std::string::npos);
    CHECK(parse_error("match /(/ => say \"x\"").find("bad regular expression") != std::string::npos);
    CHECK(parse_error("match \"a\" => call Bad({})").find("invalid tool name") != std::string::npos);
    CHECK(parse_error("match \"a\" => call t({\"x\":})").find("bad JSON arguments") != std::string::npos);
    CHECK(parse_error("match \"a\" => call t({\"x\":1)").find("unbalanced") != std::string::npos);
    CHECK(parse_error("match \"a\" => say \"x").find("unterminated string") != std::string::npos);
    CHECK(parse_error("match \"a\" => shout \"x\"").find("expected 'call' or 'say'") != std::string::npos);

    try {
        ScriptedPlanner::load("/no/such/rules.txt");
        FAIL("expected malformed_rules");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("/no/such/rules.txt") != std::string::npos);
    }
}

TEST_CASE("shipped rules parse")
{
    CHECK(testing::shipped_planner().rule_count() >= 3);
}

TEST_CASE("templates")
{
    const json content = {{"readings", {{{"device_id", "sim-1"}, {"temperature", 21.37}, {"note", nullptr}}}}, {"count", 1}};
    CHECK(fill_template("{device_id} at {temperature} ({count})", &content, "") == "sim-1 at 21.37 (1)");
    CHECK(fill_template("{missing} {note}", &content, "") == "n/a n/a");
    CHECK(fill_template("you said {user_text}", nullptr, "hi") == "you said hi");
    CHECK(fill_template("{not a name} {} {", &content, "") == "{not a name} {} {");
    CHECK(fill_template("{count}", nullptr, "") == "n/a");
}

TEST_CASE("first matching rule fires, literals are case-insensitive")
{
    const auto p = ScriptedPlanner::parse("match \"Hello\" => say \"hi there\"\nmatch /.*/ => say \"catch-all\"\n");
    CHECK(p.decide(turn("well HELLO"), {}).text() == "hi there");
    CHECK(p.decide(turn("bye"), {}).text() == "catch-all");
}

TEST_CASE("no matching rule yields the fallback")
{
    const auto p = ScriptedPlanner::parse("match \"weather\" => say \"x\"");
    CHECK(p.decide(turn("tell me a joke"), {}).text() == ScriptedPlanner::kFallbackText);
    CHECK(p.decide(std::vector<ChatMessage>{ChatMessage::system("s")}, {}).text() == ScriptedPlanner::kFallbackText);
}

TEST_CASE("steps advance with tool rounds and fill from the newest result")
{
    const auto p = ScriptedPlanner::parse(
        R"(match /broken/i => call report_issue({"description":"{user_text}"}), get_recent_sensor_data({"limit":1}) => say "ticket #{ticket_id}")");
    auto msgs = turn("sensor is broken");
    const auto first = p.decide(msgs, {});
    REQUIRE(!first.is_final());
    REQUIRE(first.calls().size() == 2);
    CHECK(first.calls()[0].tool_name == "report_issue");
    CHECK(first.calls()[0].args == json{{"description", "sensor is broken"}});
    CHECK(first.calls()[1].args == json{{"limit", 1}});

    msgs.push_back(ChatMessage::assistant("", {{"call_1", "report_issue", first.calls()[0].args}}));
    msgs.push_back(ChatMessage::tool("call_1", mcp::ToolResult::ok({{"ticket_id", 7}}).to_json().dump()));
    CHECK(p.decide(msgs, {}).text() == "ticket #7");
}

TEST_CASE("a tool error ends the turn with the error message")
{
    const auto p = ScriptedPlanner::parse(R"(match "x" => call t({}) => say "ok")");
    auto msgs = turn("x");
    msgs.push_back(ChatMessage::assistant("", {{"call_1", "t", json::object()}}));
    msgs.push_back(ChatMessage::tool("call_1", mcp::ToolResult::error("limit too big").to_json().dump()));
    CHECK(p.decide(msgs, {}).text() == "Sorry, that did not work: limit too big");
}

TEST_CASE("errors from an earlier turn do not leak into the next one")
{
    const auto p = ScriptedPlanner::parse(R"(match "x" => call t({}) => say "ok")");
    auto msgs = turn("x");
    msgs.push_back(ChatMessage::assistant("", {{"call_1", "t", json::object()}}));
    msgs.push_back(ChatMessage::tool("call_1", mcp::ToolResult::error("bad").to_json().dump()));
    msgs.push_back(ChatMessage::assistant("Sorry"));
    msgs.push_back(ChatMessage::user("x again"));
    CHECK(!p.decide(msgs, {}).is_final());
}

TEST_CASE("past the last step the last step repeats")
{
    const auto p = ScriptedPlanner::parse(R"(match "loop" => call t({}))");
    auto msgs = turn("loop");
    for (int i = 0; i < 4; ++i) {
        const auto d = p.decide(msgs, {});
        REQUIRE(!d.is_final());
        msgs.push_back(ChatMessage::assistant("", {{"call_" + std::to_string(i + 1), "t", json::object()}}));
        msgs.push_back(ChatMessage::tool("call_" + std::to_string(i + 1), mcp::ToolResult::ok({}).to_json().dump()));
    }
}
