// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/common/time.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <optional>
#include <string>
#include <vector>

namespace ami::app {

struct SimulatorOptions {
    int devices = 1;
    std::chrono::seconds interval{60};
    std::chrono::seconds duration{60}; // rounds = duration / interval (at least one)
    std::uint64_t seed = 42;
    Timestamp start{};
};

/// Synthetic indoor air readings, one per device per round, rounds in time order:
///
///     temperature = 21 + 4 sin(2 pi h / 24) + N(0, 0.3)
///     humidity    = 45 + 10 sin(2 pi h / 24 + pi / 3), clipped to [0, 100]
///     co2         = max(400, 500 + N(0, 40))
///     pm1_0 <= pm2_5 <= pm10 as cumulative positive increments
///
/// h is the UTC hour of day of captured_at including its fraction. Values carry two decimals.
/// Identical options produce identical sequences.
class SensorSimulator {
public:
    explicit SensorSimulator(SimulatorOptions options);

    std::size_t rounds() const noexcept;
    /// Payloads for round `round` (0-based), one per device "sim-<n>". Rounds must be requested in order.
    std::vector<nlohmann::json> next_round();
    std::vector<nlohmann::json> all_payloads();

private:
    nlohmann::json make_payload(int device, Timestamp at);

    SimulatorOptions options_;
    std::size_t round_ = 0;
    std::mt19937_64 rng_;
};

struct PostOutcome {
    std::size_t sent = 0;
    std::size_t failed = 0;
    std::vector<std::string> errors; // one line per failed post
};

/// Posts every round to `base_url`/sensor_data/. `pace` runs between rounds (real-time mode sleeps).
PostOutcome run_simulation(SensorSimulator& sim, const std::string& base_url, const std::optional<std::string>& device_key,
                           const std::function<void()>& pace = {}, bool dry_run = false,
                           const std::function<void(const nlohmann::json&)>& on_payload = {});

} // namespace ami::app
