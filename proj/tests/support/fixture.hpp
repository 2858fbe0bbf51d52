// SPDX-License-Identifier: Apache-2.0
// Shared wiring for tests: in-memory stores, the four AMI tools and an MCP server.
#pragma once

#include "ami/agent/conversation_store.hpp"
#include "ami/agent/orchestrator.hpp"
#include "ami/agent/scripted_planner.hpp"
#include "ami/app/simulator.hpp"
#include "ami/ingest/api_service.hpp"
#include "ami/ingest/auth.hpp"
#include "ami/ingest/validation.hpp"
#include "ami/mcp/server.hpp"
#include "ami/timeseries/reading_store.hpp"
#include "ami/tools/ami_tools.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace ami::testing {

inline std::filesystem::path source_dir()
{
    return AMI_SOURCE_DIR;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Timestamp at(const char* rfc3339)
{
    return *parse_rfc3339(rfc3339);
}

/// Clock frozen at 2025-01-01T12:00:00Z unless moved.
struct FakeClock {
    std::shared_ptr<Timestamp> now = std::make_shared<Timestamp>(at("2025-01-01T12:00:00Z"));
    Clock clock() const
    {
        auto p = now;
        return [p] { return *p; };
    }
    void advance(std::chrono::seconds s) { *now += s; }
};

inline timeseries::SensorReading reading(std::string device, const char* ts, double temperature = 21.5,
                                         double humidity = 40, double co2 = 600, double pm1 = 3, double pm25 = 8,
                                         double pm10 = 12)
{
    timeseries::SensorReading r{std::move(device), at(ts), temperature, humidity, co2, pm1, pm25, pm10, {}};
    timeseries::normalize(r);
    return r;
}

inline const std::vector<std::string>& test_users()
{
    static const std::vector<std::string> users{"alice", "bob", "carol"};
    return users;
}

/// Stores, registry and server with three seeded users. Not copyable (the registry
/// handlers hold references into it).
struct ToolFixture {
    FakeClock time;
    timeseries::MemoryReadingStore readings;
    tools::IssueStore issues{time.clock()};
    tools::ProfileStore profiles;
    mcp::ToolRegistry registry;
    std::unique_ptr<mcp::McpServer> server;

    ToolFixture()
    {
        for (const auto& u : test_users())
            profiles.seed({u, u, u + "@example.org", std::nullopt});
        tools::register_ami_tools(registry, tools::ToolContext{readings, issues, profiles});
        server = std::make_unique<mcp::McpServer>(registry);
    }
    ToolFixture(const ToolFixture&) = delete;
    ToolFixture& operator=(const ToolFixture&) = delete;

    /// Six simulator readings: two devices, three one-minute rounds from 10:00Z, seed 42.
    void seed_simulated()
    {
        app::SimulatorOptions opts;
        opts.devices = 2;
        opts.interval = std::chrono::seconds(60);
        opts.duration = std::chrono::seconds(180);
        opts.seed = 42;
        opts.start = at("2025-01-01T10:00:00Z");
        app::SensorSimulator sim(opts);
        for (const auto& payload : sim.all_payloads())
            readings.insert(std::get<timeseries::SensorReading>(ingest::validate_sensor_payload(payload)));
    }
};

inline agent::ScriptedPlanner shipped_planner()
{
    return agent::ScriptedPlanner::load(source_dir() / "config" / "rules.txt");
}

/// ToolFixture plus sessions, conversations, orchestrator and the REST surface.
/// Passwords are "<user>-pass" (cheap hashes to keep tests fast).
struct ApiFixture : ToolFixture {
    ingest::UserDirectory users;
    ingest::SessionManager sessions{time.clock()};
    agent::ConversationStore conversations{time.clock()};
    std::unique_ptr<agent::AgentOrchestrator> orchestrator;
    std::unique_ptr<agent::Planner> planner;
    std::unique_ptr<ingest::ApiService> api;

    explicit ApiFixture(std::unique_ptr<agent::Planner> p = nullptr, agent::OrchestratorOptions options = {},
                        std::optional<std::string> device_key = std::nullopt)
    {
        for (const auto& u : test_users())
            users.add(u, ingest::hash_password(u + "-pass", 1000));
        orchestrator = std::make_unique<agent::AgentOrchestrator>(*server, options);
        planner = p ? std::move(p) : std::make_unique<agent::ScriptedPlanner>(shipped_planner());
        api = std::make_unique<ingest::ApiService>(ingest::ApiDependencies{
            readings, issues, profiles, users, sessions, *server, *orchestrator, *planner, conversations, device_key});
    }

    std::string token_for(const std::string& user) { return sessions.open(user).token; }

    ingest::HttpResponse call(const std::string& method, const std::string& path, const std::string& body = "",
                              const std::string& token = "", std::map<std::string, std::string> query = {},
                              const std::string& content_type = "application/json") const
    {
        ingest::HttpRequest req;
        req.method = method;
        req.path = path;
        req.body = body;
        req.query = std::move(query);
        if (!token.empty())
            req.headers["authorization"] = "Bearer " + token;
        if (!content_type.empty())
            req.headers["content-type"] = content_type;
        return api->handle(req);
    }
};

} // namespace ami::testing
