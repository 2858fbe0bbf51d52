// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/agent/planner.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <functional>
#include <string>

namespace ami::agent {

struct RemotePlannerOptions {
    std::string endpoint; // full URL of the chat-completions resource, http:// or https://
    std::string api_key;  // sent as a bearer token when non-empty
    std::string model;
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500}; // doubles after each failed attempt
    std::chrono::seconds timeout{60};
};

/// Request body for an OpenAI-compatible chat-completions call.
nlohmann::json build_chat_request(const std::string& model, std::span<const ChatMessage> messages,
                                  std::span<const openapi::PlannerToolSpec> tools);

/// Maps `choices[0].message` to a decision. Throws Error(malformed_response).
PlannerDecision parse_chat_response(const nlohmann::json& body);

/// Planner backed by an OpenAI-compatible HTTP endpoint. Connection errors, 429 and 5xx are
/// retried with exponential backoff; other statuses fail at once. Exhausted or non-retryable
/// failures throw Error(planner_unreachable).
class RemotePlanner final : public Planner {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    /// Throws Error(config_invalid) for an unusable endpoint or empty model.
    explicit RemotePlanner(RemotePlannerOptions options, Sleeper sleeper = {});

    PlannerDecision decide(std::span<const ChatMessage> messages,
                           std::span<const openapi::PlannerToolSpec> tools) const override;

private:
    RemotePlannerOptions options_;
    std::string origin_; // scheme://host[:port]
    std::string path_;
    Sleeper sleeper_;
};

} // namespace ami::agent
