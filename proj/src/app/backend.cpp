// SPDX-License-Identifier: Apache-2.0
#include "ami/app/backend.hpp"

#include "ami/agent/remote_planner.hpp"
#include "ami/agent/scripted_planner.hpp"
#include "ami/common/error.hpp"
#include "ami/tools/ami_tools.hpp"

#include <cstdlib>

namespace ami::app {

std::unique_ptr<agent::Planner> make_planner(const Config& config)
{
    if (config.planner_mode == PlannerMode::scripted) {
        if (!config.scripted_rules_path)
            throw Error(Errc::config_invalid, "config field scripted_rules_path: required when planner_mode is \"scripted\"");
        return std::make_unique<agent::ScriptedPlanner>(agent::ScriptedPlanner::load(*config.scripted_rules_path));
    }
    agent::RemotePlannerOptions opts;
    opts.endpoint = config.remote_endpoint;
    opts.model = config.remote_model;
    if (!config.remote_key_env.empty())
        if (const char* key = std::getenv(config.remote_key_env.c_str()))
            opts.api_key = key;
    return std::make_unique<agent::RemotePlanner>(std::move(opts));
}

Backend::Backend(const Config& config, Clock clock) : Backend(config, make_planner(config), std::move(clock)) {}

Backend::Backend(const Config& config, std::unique_ptr<agent::Planner> planner, Clock clock)
    : planner_(std::move(planner))
{
    wire(config, std::move(clock));
}

void Backend::wire(const Config& config, Clock clock)
{
    const auto& dir = config.data_dir;
    if (dir)
        readings_ = std::make_unique<timeseries::FileReadingStore>(*dir / "readings.jsonl");
    else
        readings_ = std::make_unique<timeseries::MemoryReadingStore>();
    issues_ = std::make_unique<tools::IssueStore>(clock, dir ? std::optional(*dir / "issues.jsonl") : std::nullopt);
    profiles_ = std::make_unique<tools::ProfileStore>(dir ? std::optional(*dir / "profiles.jsonl") : std::nullopt);
    conversations_ = std::make_unique<agent::ConversationStore>(
        clock, dir ? std::optional(*dir / "conversations.jsonl") : std::nullopt);

    for (const auto& u : config.users) {
        users_.add(u.user_id, u.password_hash);
        profiles_->seed(tools::UserProfile{u.user_id, u.display_name, u.email, u.notification_threshold_pm2_5});
    }
    sessions_ = std::make_unique<ingest::SessionManager>(clock);

    tools::register_ami_tools(registry_, tools::ToolContext{*readings_, *issues_, *profiles_});
    server_ = std::make_unique<mcp::McpServer>(registry_);
    orchestrator_ = std::make_unique<agent::AgentOrchestrator>(*server_, agent::OrchestratorOptions{config.max_rounds, 50});

    api_ = std::make_unique<ingest::ApiService>(ingest::ApiDependencies{
        *readings_, *issues_, *profiles_, users_, *sessions_, *server_, *orchestrator_, *planner_, *conversations_,
        config.device_key});
}

void Backend::flush()
{
    if (auto* file = dynamic_cast<timeseries::FileReadingStore*>(readings_.get()))
        file->flush();
}

} // namespace ami::app
