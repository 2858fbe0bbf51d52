// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/agent/chat.hpp"
#include "ami/common/append_log.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace ami::agent {

/// One conversation per user. Access to a user's conversation is serialized; different users
/// proceed in parallel. Messages are appended to the log as `{"user_id", "message", "at"}` lines.
class ConversationStore {
public:
    explicit ConversationStore(Clock clock = system_now,
                               const std::optional<std::filesystem::path>& log_path = std::nullopt);

    /// Runs `fn` with exclusive access to `user_id`'s conversation, creating it with
    /// `system_prompt` first. Messages added by `fn` are persisted even if it throws.
    void with_conversation(const std::string& user_id, const std::string& system_prompt,
                           const std::function<void(Conversation&)>& fn);

    std::optional<Conversation> snapshot(const std::string& user_id) const;

private:
    struct Slot {
        std::mutex mutex;
        Conversation conversation;
    };

    Slot& slot_for(const std::string& user_id);
    void persist(const Conversation& conversation, std::size_t from);

    Clock clock_;
    mutable std::mutex map_mutex_;
    std::map<std::string, std::unique_ptr<Slot>> slots_;
    std::unique_ptr<AppendLog> log_;
};

} // namespace ami::agent
