// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/agent/chat.hpp"
#include "ami/openapi/bridge.hpp"

#include <span>

namespace ami::agent {

/// Maps a conversation window and the available tools to the next step. Implementations
/// keep no state between calls and must tolerate concurrent decide() calls.
/// `messages` is non-empty and starts with the system prompt.
/// Remote implementations throw Error(planner_unreachable) or Error(malformed_response).
class Planner {
public:
    virtual ~Planner() = default;

    virtual PlannerDecision decide(std::span<const ChatMessage> messages,
                                   std::span<const openapi::PlannerToolSpec> tools) const = 0;
};

} // namespace ami::agent
