// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/agent/conversation_store.hpp"
#include "ami/agent/orchestrator.hpp"
#include "ami/agent/planner.hpp"
#include "ami/app/config.hpp"
#include "ami/ingest/api_service.hpp"
#include "ami/ingest/auth.hpp"
#include "ami/mcp/server.hpp"
#include "ami/mcp/tool_registry.hpp"
#include "ami/timeseries/reading_store.hpp"
#include "ami/tools/records.hpp"

#include <memory>

namespace ami::app {

/// Every long-lived object behind `ami serve`, wired in dependency order. With a data_dir the
/// stores are append-log backed (readings.jsonl, issues.jsonl, profiles.jsonl,
/// conversations.jsonl) and replayed here; without one everything lives in memory.
class Backend {
public:
    /// Throws Error(config_invalid / malformed_rules / storage_failure) naming the culprit.
    explicit Backend(const Config& config, Clock clock = system_now);

    /// Same wiring with a caller-supplied planner (tests).
    Backend(const Config& config, std::unique_ptr<agent::Planner> planner, Clock clock = system_now);

    timeseries::ReadingStore& readings() { return *readings_; }
    tools::IssueStore& issues() { return *issues_; }
    tools::ProfileStore& profiles() { return *profiles_; }
    ingest::SessionManager& sessions() { return *sessions_; }
    const ingest::UserDirectory& users() const { return users_; }
    mcp::ToolRegistry& registry() { return registry_; }
    mcp::McpServer& mcp_server() { return *server_; }
    const agent::AgentOrchestrator& orchestrator() const { return *orchestrator_; }
    const agent::Planner& planner() const { return *planner_; }
    agent::ConversationStore& conversations() { return *conversations_; }
    const ingest::ApiService& api() const { return *api_; }

    /// Forces buffered log writes to disk.
    void flush();

private:
    void wire(const Config& config, Clock clock);

    std::unique_ptr<timeseries::ReadingStore> readings_;
    std::unique_ptr<tools::IssueStore> issues_;
    std::unique_ptr<tools::ProfileStore> profiles_;
    ingest::UserDirectory users_;
    std::unique_ptr<ingest::SessionManager> sessions_;
    mcp::ToolRegistry registry_;
    std::unique_ptr<mcp::McpServer> server_;
    std::unique_ptr<agent::Planner> planner_;
    std::unique_ptr<agent::AgentOrchestrator> orchestrator_;
    std::unique_ptr<agent::ConversationStore> conversations_;
    std::unique_ptr<ingest::ApiService> api_;
};

/// Planner selected by the config: the scripted rules file or the remote endpoint with the key
/// read from the environment variable named by remote_key_env.
std::unique_ptr<agent::Planner> make_planner(const Config& config);

} // namespace ami::app
