// SPDX-License-Identifier: Apache-2.0
#include "ami/timeseries/sensor_reading.hpp"

#include "ami/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace ami::timeseries {

std::string_view measurement_name(Measurement m) noexcept
{
    switch (m) {
    case Measurement::temperature: return "temperature";
    case Measurement::humidity: return "humidity";
    case Measurement::co2: return "co2";
    case Measurement::pm1_0: return "pm1_0";
    case Measurement::pm2_5: return "pm2_5";
    case Measurement::pm10: return "pm10";
    }
    return "";
}

std::optional<Measurement> parse_measurement(std::string_view name) noexcept
{
    for (auto m : kMeasurements)
        if (measurement_name(m) == name)
            return m;
    return std::nullopt;
}

double SensorReading::value(Measurement m) const noexcept
{
    return const_cast<SensorReading*>(this)->value(m);
}

double& SensorReading::value(Measurement m) noexcept
{
    switch (m) {
    case Measurement::temperature: return temperature;
    case Measurement::humidity: return humidity;
    case Measurement::co2: return co2;
    case Measurement::pm1_0: return pm1_0;
    case Measurement::pm2_5: return pm2_5;
    case Measurement::pm10: return pm10;
    }
    return temperature;
}

std::optional<FieldViolation> check_bounds(const SensorReading& r)
{
    if (r.device_id.empty())
        return FieldViolation{"device_id", "device_id must be a non-empty string"};
    for (auto m : kMeasurements) {
        if (!std::isfinite(r.value(m)))
            return FieldViolation{std::string(measurement_name(m)),
                                  std::string(measurement_name(m)) + " must be a finite number"};
    }
    if (r.temperature < -90 || r.temperature > 90)
        return FieldViolation{"temperature", "temperature must be within [-90, 90] degrees Celsius"};
    if (r.humidity < 0 || r.humidity > 100)
        return FieldViolation{"humidity", "humidity must be within [0, 100] percent"};
    if (r.co2 < 0)
        return FieldViolation{"co2", "co2 must be >= 0 ppm"};
    for (auto m : {Measurement::pm1_0, Measurement::pm2_5, Measurement::pm10}) {
        if (r.value(m) < 0)
            return FieldViolation{std::string(measurement_name(m)),
                                  std::string(measurement_name(m)) + " must be >= 0 ug/m3"};
    }
    return std::nullopt;
}

void refresh_flags(SensorReading& r)
{
    const std::string pm(kPmOrderingFlag);
    std::erase(r.flags, pm);
    if (!(r.pm1_0 <= r.pm2_5 && r.pm2_5 <= r.pm10))
        r.flags.push_back(pm);
    std::sort(r.flags.begin(), r.flags.end());
    r.flags.erase(std::unique(r.flags.begin(), r.flags.end()), r.flags.end());
}

double quantize_measurement(double value) noexcept
{
    constexpr double kLimit = 9.0e9; // 9e9 * 1e6 < 2^53
    if (!std::isfinite(value) || std::fabs(value) >= kLimit)
        return value;
    const double q = std::round(value * 1e6) / 1e6;
    return q == 0.0 ? 0.0 : q; // no negative zero
}

void normalize(SensorReading& r)
{
    for (auto m : kMeasurements)
        r.value(m) = quantize_measurement(r.value(m));
    refresh_flags(r);
}

nlohmann::json to_json(const SensorReading& r)
{
    return {
        {"device_id", r.device_id},
        {"captured_at", format_rfc3339(r.captured_at)},
        {"temperature", r.temperature},
        {"humidity", r.humidity},
        {"co2", r.co2},
        {"pm1_0", r.pm1_0},
        {"pm2_5", r.pm2_5},
        {"pm10", r.pm10},
        {"flags", r.flags},
    };
}

SensorReading reading_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error(Errc::parse_error, "reading record is not an object");
    SensorReading r;
    const auto& id = j.at("device_id");
    if (!id.is_string())
        throw Error(Errc::parse_error, "device_id is not a string");
    r.device_id = id.get<std::string>();
    const auto ts = parse_rfc3339(j.at("captured_at").get<std::string>());
    if (!ts)
        throw Error(Errc::parse_error, "captured_at is not RFC 3339");
    r.captured_at = *ts;
    for (auto m : kMeasurements) {
        const auto& v = j.at(std::string(measurement_name(m)));
        if (!v.is_number())
            throw Error(Errc::parse_error, std::string(measurement_name(m)) + " is not a number");
        r.value(m) = v.get<double>();
    }
    if (j.contains("flags"))
        r.flags = j.at("flags").get<std::vector<std::string>>();
    refresh_flags(r);
    return r;
}

nlohmann::json to_json(const StoredReading& r)
{
    auto j = to_json(r.reading);
    j["id"] = r.id;
    return j;
}

nlohmann::json to_json(const std::vector<StoredReading>& rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& row : rows)
        arr.push_back(to_json(row));
    return arr;
}

} // namespace ami::timeseries
