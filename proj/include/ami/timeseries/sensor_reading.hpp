// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/common/time.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ami::timeseries {

enum class Measurement { temperature, humidity, co2, pm1_0, pm2_5, pm10 };

inline constexpr std::array<Measurement, 6> kMeasurements = {
    Measurement::temperature, Measurement::humidity, Measurement::co2,
    Measurement::pm1_0,       Measurement::pm2_5,    Measurement::pm10,
};

inline constexpr std::string_view kPmOrderingFlag = "pm-ordering";

std::string_view measurement_name(Measurement m) noexcept;
std::optional<Measurement> parse_measurement(std::string_view name) noexcept;

struct SensorReading {
    std::string device_id;
    Timestamp captured_at{};
    double temperature = 0; // °C
    double humidity = 0;    // %RH
    double co2 = 0;         // ppm
    double pm1_0 = 0;       // µg/m³
    double pm2_5 = 0;
    double pm10 = 0;
    std::vector<std::string> flags; // sorted, unique

    double value(Measurement m) const noexcept;
    double& value(Measurement m) noexcept;

    friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

struct StoredReading {
    std::int64_t id = 0;
    SensorReading reading;

    friend bool operator==(const StoredReading&, const StoredReading&) = default;
};

struct FieldViolation {
    std::string field;
    std::string message;
};

/// First bound violated by `r`, checked in field order; nullopt when every bound holds.
std::optional<FieldViolation> check_bounds(const SensorReading& r);

/// Recomputes derived flags: "pm-ordering" iff not (pm1_0 <= pm2_5 <= pm10).
void refresh_flags(SensorReading& r);

/// Rounds to the 1e-6 grid the CSV export can represent exactly. Magnitudes past
/// 2^53 / 1e6 already have coarser spacing than 1e-6 and are returned unchanged.
double quantize_measurement(double value) noexcept;

/// Quantizes every measurement and refreshes flags.
void normalize(SensorReading& r);

/// Keys are exactly the SensorReading field names; captured_at is RFC 3339.
nlohmann::json to_json(const SensorReading& r);
/// Inverse of to_json; throws ami::Error(parse_error) on shape mismatch.
SensorReading reading_from_json(const nlohmann::json& j);

/// to_json(reading) plus an "id" key.
nlohmann::json to_json(const StoredReading& r);
nlohmann::json to_json(const std::vector<StoredReading>& rows);

} // namespace ami::timeseries
