// SPDX-License-Identifier: Apache-2.0
// ami: serve the backend, feed it simulated sensors, chat with it, evaluate ratings.

#include "ami/app/backend.hpp"
#include "ami/app/chat_client.hpp"
#include "ami/app/config.hpp"
#include "ami/app/simulator.hpp"
#include "ami/common/error.hpp"
#include "ami/ingest/auth.hpp"
#include "ami/ingest/http_server.hpp"
#include "ami/irr/report.hpp"
#include "ami/mcp/server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <pthread.h>
#include <string>
#include <thread>
#include <unistd.h>

namespace {

int cmd_serve(const std::string& config_path)
{
    const auto config = ami::app::load_config(config_path);

    // Block the shutdown signals before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    ami::app::Backend backend(config);
    ami::ingest::HttpServer server(backend.api(), config.static_dir);
    const int port = server.bind(config.bind_host, config.bind_port);
    server.start();
    std::cout << "listening on " << config.bind_host << ":" << port << std::endl;

    int received = 0;
    sigwait(&signals, &received);
    server.stop();
    backend.flush();
    std::cout << "shutting down" << std::endl;
    return 0;
}

int cmd_simulate(const std::string& url, int devices, int interval, int duration, std::uint64_t seed,
                 const std::string& start, bool fast, bool dry_run, const std::string& device_key)
{
    ami::app::SimulatorOptions opts;
    opts.devices = devices;
    opts.interval = std::chrono::seconds(interval);
    opts.duration = std::chrono::seconds(duration);
    opts.seed = seed;
    if (start.empty()) {
        opts.start = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    } else {
        const auto ts = ami::parse_rfc3339(start);
        if (!ts)
            throw ami::Error(ami::Errc::invalid_argument, "--start is not an RFC 3339 timestamp: " + start);
        opts.start = *ts;
    }

    ami::app::SensorSimulator sim(opts);
    auto pace = [&] {
        if (!fast)
            std::this_thread::sleep_for(opts.interval);
    };
    auto print = [](const nlohmann::json& payload) { std::cout << payload.dump() << '\n'; };
    const auto outcome = ami::app::run_simulation(sim, url, device_key.empty() ? std::nullopt : std::optional(device_key),
                                                  pace, dry_run, dry_run ? print : std::function<void(const nlohmann::json&)>{});
    for (const auto& e : outcome.errors)
        std::cerr << "post failed: " << e << '\n';
    if (!dry_run)
        std::cout << "posted " << outcome.sent - outcome.failed << "/" << outcome.sent << " readings" << std::endl;
    if (outcome.failed * 10 > outcome.sent) {
        std::cerr << "ami: error: " << outcome.failed << " of " << outcome.sent << " posts failed\n";
        return 1;
    }
    return 0;
}

int cmd_chat(const std::string& url, const std::string& user, std::string password)
{
    if (password.empty()) {
        if (const char* env = std::getenv("AMI_PASSWORD"))
            password = env;
    }
    if (password.empty())
        throw ami::Error(ami::Errc::invalid_argument, "no password: pass --password or set AMI_PASSWORD");

    ami::app::ChatClient client(url);
    client.login(user, password);

    const bool interactive = isatty(STDIN_FILENO) != 0;
    std::string line;
    while (true) {
        if (interactive)
            std::cout << "you> " << std::flush;
        if (!std::getline(std::cin, line))
            break;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto reply = client.send(line);
        for (const auto& out : ami::app::render_chat_response(reply.status, reply.body))
            std::cout << out << '\n';
        std::cout << std::flush;
        if (reply.status == 401)
            return 1;
    }
    if (interactive)
        std::cout << '\n';
    return 0;
}

int cmd_eval_irr(const std::string& csv_path, const std::string& scheme_name, int scale_max, bool as_json)
{
    const auto scheme = scheme_name == "linear" ? ami::irr::KappaScheme::linear : ami::irr::KappaScheme::quadratic;
    const auto reports = ami::irr::evaluate_csv(csv_path, scheme, scale_max);
    if (as_json)
        std::cout << ami::irr::reports_to_json(reports, scheme).dump(2) << '\n';
    else
        std::cout << ami::irr::render_table(reports, scheme);
    return 0;
}

int cmd_mcp_stdio(const std::string& config_path, const std::string& user)
{
    const auto config = ami::app::load_config(config_path);
    ami::app::Backend backend(config);
    if (!backend.users().contains(user))
        throw ami::Error(ami::Errc::unknown_user, "unknown user: " + user);
    ami::mcp::serve_stdio(backend.mcp_server(), std::cin, std::cout, user);
    backend.flush();
    return 0;
}

int cmd_hash_password(std::string password, int iterations)
{
    if (password.empty() && !std::getline(std::cin, password))
        throw ami::Error(ami::Errc::invalid_argument, "no password on stdin");
    std::cout << ami::ingest::hash_password(password, iterations) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"AMI air-quality assistant"};
    app.require_subcommand(1);

    std::string config_path;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API and MCP endpoint");
    serve->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    std::string url = "http://127.0.0.1:8080";
    int devices = 1, interval = 60, duration = 3600;
    std::uint64_t seed = 42;
    std::string start, device_key;
    bool fast = false, dry_run = false;
    auto* simulate = app.add_subcommand("simulate-sensors", "Post synthetic sensor readings");
    simulate->add_option("--url", url, "Server base URL")->capture_default_str();
    simulate->add_option("--devices", devices, "Number of devices")->capture_default_str()->check(CLI::Range(1, 1000));
    simulate->add_option("--interval", interval, "Seconds between rounds")->capture_default_str()->check(CLI::Range(1, 86400));
    simulate->add_option("--duration", duration, "Seconds of simulated time")->capture_default_str()->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", seed, "Random seed")->capture_default_str();
    simulate->add_option("--start", start, "captured_at of the first round (RFC 3339, default now)");
    simulate->add_option("--device-key", device_key, "Pre-shared device key");
    simulate->add_flag("--fast", fast, "Post all rounds without waiting");
    simulate->add_flag("--dry-run", dry_run, "Print payloads instead of posting");

    std::string user, password;
    auto* chat = app.add_subcommand("chat", "Chat with the assistant from the terminal");
    chat->add_option("--url", url, "Server base URL")->capture_default_str();
    chat->add_option("--user", user, "User name")->required();
    chat->add_option("--password", password, "Password (default: $AMI_PASSWORD)");

    std::string csv_path, scheme = "quadratic";
    int scale_max = 5;
    bool as_json = false;
    auto* eval = app.add_subcommand("eval-irr", "Inter-rater reliability table from a ratings CSV");
    eval->add_option("--csv", csv_path, "criterion,rater,item,score file")->required();
    eval->add_option("--scheme", scheme, "Kappa weights")->capture_default_str()->check(CLI::IsMember({"quadratic", "linear"}));
    eval->add_option("--scale-max", scale_max, "Top of the rating scale")->capture_default_str()->check(CLI::Range(2, 100));
    eval->add_flag("--json", as_json, "JSON instead of a table");

    std::string stdio_user;
    auto* stdio = app.add_subcommand("mcp-stdio", "Serve MCP over stdin/stdout as one user");
    stdio->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    stdio->add_option("--user", stdio_user, "Acting user")->required();

    int iterations = ami::ingest::kDefaultPbkdf2Iterations;
    std::string plain;
    auto* hash = app.add_subcommand("hash-password", "Print a password hash for the config file");
    hash->add_option("--password", plain, "Password (default: first line of stdin)");
    hash->add_option("--iterations", iterations, "PBKDF2 iterations")->capture_default_str()->check(CLI::Range(1000, 10000000));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve)
            return cmd_serve(config_path);
        if (*simulate)
            return cmd_simulate(url, devices, interval, duration, seed, start, fast, dry_run, device_key);
        if (*chat)
            return cmd_chat(url, user, password);
        if (*eval)
            return cmd_eval_irr(csv_path, scheme, scale_max, as_json);
        if (*stdio)
            return cmd_mcp_stdio(config_path, stdio_user);
        if (*hash)
            return cmd_hash_password(plain, iterations);
    } catch (const ami::Error& e) {
        std::cerr << "ami: error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ami: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
