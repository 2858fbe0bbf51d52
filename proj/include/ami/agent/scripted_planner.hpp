// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/agent/planner.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ami::agent {

/// Deterministic rule-driven planner.
///
/// Rule file, one rule per line (`#` starts a comment line):
///
///     match /weather|air quality/i => call get_recent_sensor_data({"limit":1}) => say "It is {temperature} C."
///     match "stuck" => call report_issue({"description":"{user_text}"}) => say "Created issue #{ticket_id}."
///
/// A pattern is either `/regex/` (ECMAScript, optional `i` flag, searched anywhere) or a
/// double-quoted literal matched as a case-insensitive substring of the latest user message.
/// A call step may list several calls separated by commas; they form one decision.
///
/// The first matching rule fires. Its step is chosen by how many tool-call rounds have already
/// happened since the latest user message; past the last step the last step repeats.
/// `{name}` placeholders resolve against the newest tool result (first key `name` found in a
/// depth-first walk; numbers render exactly as in the result JSON), `{user_text}` is the latest
/// user message, and anything unresolved renders as `n/a`. Placeholders inside call arguments are
/// expanded in string values only. If the newest tool result of the turn is an error, the
/// planner replies with that error instead of continuing the script.
class ScriptedPlanner final : public Planner {
public:
    static constexpr std::string_view kFallbackText =
        "I can help with air quality data, issue reports, and your profile.";

    /// Throws Error(malformed_rules) naming the line.
    static ScriptedPlanner parse(std::string_view rules_text);
    /// Throws Error(malformed_rules) naming the path when it cannot be read.
    static ScriptedPlanner load(const std::filesystem::path& path);

    PlannerDecision decide(std::span<const ChatMessage> messages,
                           std::span<const openapi::PlannerToolSpec> tools) const override;

    std::size_t rule_count() const noexcept { return rules_.size(); }

private:
    struct Pattern {
        std::string source;
        bool is_regex = false;
        std::string literal; // lowercased
        std::regex regex;
    };
    struct CallTemplate {
        std::string tool;
        nlohmann::json args;
    };
    struct SayStep {
        std::string text;
    };
    using Step = std::variant<std::vector<CallTemplate>, SayStep>;
    struct Rule {
        Pattern pattern;
        std::vector<Step> steps;
    };

    bool matches(const Pattern& pattern, std::string_view text) const;

    std::vector<Rule> rules_;
};

/// Expands `{placeholder}` occurrences as described for ScriptedPlanner.
std::string fill_template(std::string_view tmpl, const nlohmann::json* tool_content, std::string_view user_text);

} // namespace ami::agent
