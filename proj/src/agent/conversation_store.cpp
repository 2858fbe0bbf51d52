// SPDX-License-Identifier: Apache-2.0
#include "ami/agent/conversation_store.hpp"

#include "ami/common/error.hpp"

namespace ami::agent {

using nlohmann::json;

ConversationStore::ConversationStore(Clock clock, const std::optional<std::filesystem::path>& log_path)
    : clock_(std::move(clock))
{
    if (!log_path)
        return;
    log_ = std::make_unique<AppendLog>(*log_path, [this](const json& rec, std::size_t) {
        const auto user = rec.at("user_id").get<std::string>();
        const auto at = parse_rfc3339(rec.at("at").get<std::string>());
        if (!at)
            throw Error(Errc::storage_failure, "bad message timestamp");
        auto& slot = slot_for(user);
        auto& conv = slot.conversation;
        if (conv.messages.empty())
            conv.created_at = *at;
        conv.updated_at = *at;
        conv.messages.push_back(message_from_json(rec.at("message")));
    });
}

ConversationStore::Slot& ConversationStore::slot_for(const std::string& user_id)
{
    std::lock_guard lock(map_mutex_);
    auto& slot = slots_[user_id];
    if (!slot) {
        slot = std::make_unique<Slot>();
        slot->conversation.user_id = user_id;
    }
    return *slot;
}

void ConversationStore::persist(const Conversation& conversation, std::size_t from)
{
    if (!log_)
        return;
    const auto at = format_rfc3339(conversation.updated_at);
    for (std::size_t i = from; i < conversation.messages.size(); ++i)
        log_->append({{"user_id", conversation.user_id}, {"at", at}, {"message", to_json(conversation.messages[i])}});
}

void ConversationStore::with_conversation(const std::string& user_id, const std::string& system_prompt,
                                          const std::function<void(Conversation&)>& fn)
{
    auto& slot = slot_for(user_id);
    std::lock_guard lock(slot.mutex);
    auto& conv = slot.conversation;
    const auto before = conv.messages.size();
    if (conv.messages.empty()) {
        conv.created_at = clock_();
        conv.messages.push_back(ChatMessage::system(system_prompt));
    }
    try {
        fn(conv);
    } catch (...) {
        conv.updated_at = clock_();
        persist(conv, before);
        throw;
    }
    conv.updated_at = clock_();
    persist(conv, before);
}

std::optional<Conversation> ConversationStore::snapshot(const std::string& user_id) const
{
    Slot* slot = nullptr;
    {
        std::lock_guard lock(map_mutex_);
        const auto it = slots_.find(user_id);
        if (it == slots_.end())
            return std::nullopt;
        slot = it->second.get();
    }
    std::lock_guard lock(slot->mutex);
    return slot->conversation;
}

} // namespace ami::agent
