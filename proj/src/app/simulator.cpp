// SPDX-License-Identifier: Apache-2.0
#include "ami/app/simulator.hpp"

#include "ami/common/error.hpp"
#include "ami/ingest/http_server.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ami::app {

namespace {

double two_decimals(double v)
{
    const double r = std::round(v * 100.0) / 100.0;
    return r == 0.0 ? 0.0 : r;
}

} // namespace

SensorSimulator::SensorSimulator(SimulatorOptions options) : options_(options), rng_(options.seed)
{
    if (options_.devices < 1)
        throw Error(Errc::invalid_argument, "devices must be >= 1");
    if (options_.interval.count() < 1)
        throw Error(Errc::invalid_argument, "interval must be >= 1 second");
    if (options_.duration.count() < 0)
        throw Error(Errc::invalid_argument, "duration must be >= 0");
}

std::size_t SensorSimulator::rounds() const noexcept
{
    return std::max<std::size_t>(1, static_cast<std::size_t>(options_.duration / options_.interval));
}

nlohmann::json SensorSimulator::make_payload(int device, Timestamp at)
{
    std::normal_distribution<double> temp_noise(0.0, 0.3);
    std::normal_distribution<double> co2_noise(0.0, 40.0);
    std::uniform_real_distribution<double> pm_base(2.0, 12.0);
    std::uniform_real_distribution<double> pm_step(0.5, 6.0);

    const auto secs_of_day = ((to_epoch_seconds(at) % 86400) + 86400) % 86400;
    const double hour = static_cast<double>(secs_of_day) / 3600.0;
    const double phase = 2.0 * std::numbers::pi * hour / 24.0;

    const double temperature = 21.0 + 4.0 * std::sin(phase) + temp_noise(rng_);
    const double humidity = std::clamp(45.0 + 10.0 * std::sin(phase + std::numbers::pi / 3.0), 0.0, 100.0);
    const double co2 = std::max(400.0, 500.0 + co2_noise(rng_));
    const double pm1 = two_decimals(pm_base(rng_));
    const double pm25 = two_decimals(pm1 + pm_step(rng_));
    const double pm10 = two_decimals(pm25 + pm_step(rng_));

    return {{"device_id", "sim-" + std::to_string(device + 1)},
            {"captured_at", format_rfc3339(at)},
            {"temperature", two_decimals(temperature)},
            {"humidity", std::clamp(two_decimals(humidity), 0.0, 100.0)},
            {"co2", two_decimals(co2)},
            {"pm1_0", pm1},
            {"pm2_5", pm25},
            {"pm10", pm10}};
}

std::vector<nlohmann::json> SensorSimulator::next_round()
{
    if (round_ >= rounds())
        return {};
    const auto at = options_.start + options_.interval * static_cast<long long>(round_);
    std::vector<nlohmann::json> out;
    for (int d = 0; d < options_.devices; ++d)
        out.push_back(make_payload(d, at));
    ++round_;
    return out;
}

std::vector<nlohmann::json> SensorSimulator::all_payloads()
{
    std::vector<nlohmann::json> out;
    for (auto batch = next_round(); !batch.empty(); batch = next_round())
        out.insert(out.end(), batch.begin(), batch.end());
    return out;
}

PostOutcome run_simulation(SensorSimulator& sim, const std::string& base_url, const std::optional<std::string>& device_key,
                           const std::function<void()>& pace, bool dry_run,
                           const std::function<void(const nlohmann::json&)>& on_payload)
{
    PostOutcome outcome;
    std::unique_ptr<httplib::Client> client;
    if (!dry_run) {
        const auto url = ingest::parse_base_url(base_url);
        client = std::make_unique<httplib::Client>(url.host, url.port);
        client->set_connection_timeout(std::chrono::seconds(5));
    }
    httplib::Headers headers;
    if (device_key)
        headers.emplace("X-Device-Key", *device_key);

    bool first = true;
    for (auto batch = sim.next_round(); !batch.empty(); batch = sim.next_round()) {
        if (!first && pace)
            pace();
        first = false;
        for (const auto& payload : batch) {
            if (on_payload)
                on_payload(payload);
            ++outcome.sent;
            if (dry_run)
                continue;
            auto res = client->Post("/sensor_data/", headers, payload.dump(), "application/json");
            if (!res) {
                ++outcome.failed;
                outcome.errors.push_back(payload["device_id"].get<std::string>() + ": " + httplib::to_string(res.error()));
            } else if (res->status != 201) {
                ++outcome.failed;
                outcome.errors.push_back(payload["device_id"].get<std::string>() + ": HTTP " + std::to_string(res->status)
                                         + " " + res->body);
            }
        }
    }
    return outcome;
}

} // namespace ami::app
