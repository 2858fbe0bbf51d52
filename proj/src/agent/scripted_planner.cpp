// SPDX-License-Identifier: Apache-2.0
#include "ami/agent/scripted_planner.hpp"

#include "ami/common/error.hpp"
#include "ami/mcp/tool_registry.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ami::agent {

using nlohmann::json;

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

class LineParser {
public:
    LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(Errc::malformed_rules, "rules line " + std::to_string(line_) + ": " + what);
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool consume(std::string_view token)
    {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token)
    {
        if (!consume(token))
            fail("expected '" + std::string(token) + "'");
    }

    std::string quoted()
    {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '"')
            fail("expected a double-quoted string");
        ++pos_;
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (c == '"')
                return out;
            if (c == '\\') {
                if (pos_ >= text_.size())
                    break;
                const char e = text_[pos_++];
                out.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
            } else {
                out.push_back(c);
            }
        }
        fail("unterminated string");
    }

    /// `/body/flags`
    std::pair<std::string, std::string> regex_literal()
    {
        skip_ws();
        ++pos_; // opening slash
        std::string body;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (c == '\\' && pos_ < text_.size() && text_[pos_] == '/') {
                body.push_back('/');
                ++pos_;
                continue;
            }
            if (c == '/') {
                std::string flags;
                while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
                    flags.push_back(text_[pos_++]);
                return {body, flags};
            }
            body.push_back(c);
        }
        fail("unterminated regular expression");
    }

    std::string identifier()
    {
        skip_ws();
        const auto start = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_)
            fail("expected a tool name");
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Balanced `{...}` honouring JSON string escapes.
    json json_object()
    {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '{')
            fail("expected a JSON object");
        const auto start = pos_;
        int depth = 0;
        bool in_string = false;
        for (; pos_ < text_.size(); ++pos_) {
            const char c = text_[pos_];
            if (in_string) {
                if (c == '\\')
                    ++pos_;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"')
                in_string = true;
            else if (c == '{')
                ++depth;
            else if (c == '}' && --depth == 0) {
                ++pos_;
                try {
                    return json::parse(text_.substr(start, pos_ - start));
                } catch (const json::parse_error& e) {
                    fail(std::string("bad JSON arguments: ") + e.what());
                }
            }
        }
        fail("unbalanced braces in arguments");
    }


private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

const json* find_key(const json& node, const std::string& key)
{
    if (node.is_object()) {
        if (const auto it = node.find(key); it != node.end())
            return &*it;
        for (const auto& [_, child] : node.items())
            if (const auto* hit = find_key(child, key))
                return hit;
    } else if (node.is_array()) {
        for (const auto& child : node)
            if (const auto* hit = find_key(child, key))
                return hit;
    }
    return nullptr;
}

json expand_args(const json& node, const json* tool_content, std::string_view user_text)
{
    if (node.is_string())
        return fill_template(node.get_ref<const std::string&>(), tool_content, user_text);
    if (node.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : node.items())
            out[k] = expand_args(v, tool_content, user_text);
        return out;
    }
    if (node.is_array()) {
        json out = json::array();
        for (const auto& v : node)
            out.push_back(expand_args(v, tool_content, user_text));
        return out;
    }
    return node;
}

} // namespace

std::string fill_template(std::string_view tmpl, const json* tool_content, std::string_view user_text)
{
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        const auto open = tmpl.find('{', pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        const auto close = tmpl.find('}', open + 1);
        const auto name = close == std::string_view::npos ? std::string_view{} : tmpl.substr(open + 1, close - open - 1);
        const bool is_name = !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
            return std::isalnum(c) || c == '_';
        });
        if (!is_name) {
            out.append(tmpl.substr(pos, open - pos + 1));
            pos = open + 1;
            continue;
        }
        out.append(tmpl.substr(pos, open - pos));
        if (name == "user_text") {
            out.append(user_text);
        } else {
            const json* value = tool_content ? find_key(*tool_content, std::string(name)) : nullptr;
            if (!value || value->is_null())
                out.append("n/a");
            else if (value->is_string())
                out.append(value->get_ref<const std::string&>());
            else
                out.append(value->dump());
        }
        pos = close + 1;
    }
    return out;
}

ScriptedPlanner ScriptedPlanner::parse(std::string_view rules_text)
{
    ScriptedPlanner planner;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < rules_text.size()) {
        auto end = rules_text.find('\n', start);
        if (end == std::string_view::npos)
            end = rules_text.size();
        ++line_no;
        std::string_view line = rules_text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);

        LineParser p(line, line_no);
        if (p.at_end() || p.peek() == '#')
            continue;

        Rule rule;
        p.expect("match");
        p.skip_ws();
        if (p.peek() == '/') {
            auto [body, flags] = p.regex_literal();
            if (!flags.empty() && flags != "i")
                p.fail("unsupported regex flags '" + flags + "'");
            rule.pattern.is_regex = true;
            rule.pattern.source = "/" + body + "/" + flags;
            try {
                auto options = std::regex::ECMAScript;
                if (flags == "i")
                    options |= std::regex::icase;
                rule.pattern.regex = std::regex(body, options);
            } catch (const std::regex_error& e) {
                p.fail(std::string("bad regular expression: ") + e.what());
            }
        } else if (p.peek() == '"') {
            rule.pattern.literal = lower(p.quoted());
            rule.pattern.source = "\"" + rule.pattern.literal + "\"";
        } else {
            p.fail("expected /regex/ or \"literal\" after match");
        }

        while (!p.at_end()) {
            p.expect("=>");
            if (p.consume("say")) {
                rule.steps.emplace_back(SayStep{p.quoted()});
            } else if (p.consume("call")) {
                std::vector<CallTemplate> calls;
                do {
                    CallTemplate call;
                    call.tool = p.identifier();
                    if (!mcp::is_valid_tool_name(call.tool))
                        p.fail("invalid tool name " + call.tool);
                    p.expect("(");
                    call.args = p.json_object();
                    p.expect(")");
                    calls.push_back(std::move(call));
                } while (p.consume(","));
                rule.steps.emplace_back(std::move(calls));
            } else {
                p.fail("expected 'call' or 'say'");
            }
        }
        if (rule.steps.empty())
            p.fail("rule has no actions");
        planner.rules_.push_back(std::move(rule));
    }
    return planner;
}

ScriptedPlanner ScriptedPlanner::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::malformed_rules, "cannot read rules file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str());
    } catch (const Error& e) {
        throw Error(Errc::malformed_rules, path.string() + ": " + e.what());
    }
}

bool ScriptedPlanner::matches(const Pattern& pattern, std::string_view text) const
{
    if (pattern.is_regex)
        return std::regex_search(text.begin(), text.end(), pattern.regex);
    return lower(text).find(pattern.literal) != std::string::npos;
}

PlannerDecision ScriptedPlanner::decide(std::span<const ChatMessage> messages,
                                        std::span<const openapi::PlannerToolSpec>) const
{
    std::size_t last_user = messages.size();
    for (std::size_t i = messages.size(); i-- > 0;) {
        if (messages[i].role == Role::user) {
            last_user = i;
            break;
        }
    }
    if (last_user == messages.size())
        return PlannerDecision::final_text(std::string(kFallbackText));
    const std::string& user_text = messages[last_user].text;

    std::size_t rounds = 0;
    std::optional<json> newest_turn_result;
    for (std::size_t i = last_user + 1; i < messages.size(); ++i) {
        if (messages[i].role == Role::assistant && !messages[i].tool_calls.empty())
            ++rounds;
        if (messages[i].role == Role::tool)
            newest_turn_result = json::parse(messages[i].text, nullptr, false);
    }
    if (newest_turn_result && newest_turn_result->is_object() && newest_turn_result->value("is_error", false)) {
        const auto* content = &(*newest_turn_result)["content"];
        return PlannerDecision::final_text(fill_template("Sorry, that did not work: {message}", content, user_text));
    }

    std::optional<json> newest_result;
    for (std::size_t i = messages.size(); i-- > 0;) {
        if (messages[i].role == Role::tool) {
            auto parsed = json::parse(messages[i].text, nullptr, false);
            if (parsed.is_object() && parsed.contains("content"))
                newest_result = parsed["content"];
            break;
        }
    }
    const json* content = newest_result ? &*newest_result : nullptr;

    for (const auto& rule : rules_) {
        if (!matches(rule.pattern, user_text))
            continue;
        const auto& step = rule.steps[std::min(rounds, rule.steps.size() - 1)];
        if (const auto* say = std::get_if<SayStep>(&step))
            return PlannerDecision::final_text(fill_template(say->text, content, user_text));
        std::vector<ToolCall> calls;
        for (const auto& c : std::get<std::vector<CallTemplate>>(step)) {
            calls.push_back({"planned_" + std::to_string(calls.size() + 1), c.tool,
                             expand_args(c.args, content, user_text)});
        }
        return PlannerDecision::tool_calls(std::move(calls));
    }
    return PlannerDecision::final_text(std::string(kFallbackText));
}

} // namespace ami::agent
