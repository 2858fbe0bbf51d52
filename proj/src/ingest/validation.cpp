// SPDX-License-Identifier: Apache-2.0
#include "ami/ingest/validation.hpp"

#include <string>

namespace ami::ingest {

using timeseries::kMeasurements;
using timeseries::measurement_name;

std::variant<SensorReading, FieldViolation> validate_sensor_payload(const nlohmann::json& body)
{
    if (!body.is_object())
        return FieldViolation{"body", "request body must be a JSON object"};

    SensorReading r;

    const auto device = body.find("device_id");
    if (device == body.end())
        return FieldViolation{"device_id", "missing field device_id"};
    if (!device->is_string() || device->get_ref<const std::string&>().empty())
        return FieldViolation{"device_id", "device_id must be a non-empty string"};
    r.device_id = device->get<std::string>();

    const auto captured = body.find("captured_at");
    if (captured == body.end())
        return FieldViolation{"captured_at", "missing field captured_at"};
    std::optional<Timestamp> ts;
    if (captured->is_string())
        ts = parse_rfc3339(captured->get_ref<const std::string&>());
    else if (captured->is_number_integer())
        ts = captured->is_number_unsigned() && captured->get<std::uint64_t>() > INT64_MAX
                 ? std::nullopt
                 : from_epoch_seconds(captured->get<std::int64_t>());
    if (!ts)
        return FieldViolation{"captured_at",
                              "captured_at must be an RFC 3339 timestamp or integer epoch seconds"};
    r.captured_at = *ts;

    for (auto m : kMeasurements) {
        const std::string name(measurement_name(m));
        const auto it = body.find(name);
        if (it == body.end())
            return FieldViolation{name, "missing field " + name};
        if (!it->is_number())
            return FieldViolation{name, name + " must be a number"};
        r.value(m) = it->get<double>();
    }

    if (auto violation = timeseries::check_bounds(r))
        return *violation;
    // Bounds sit on the 1e-6 grid, so quantizing cannot move a value across one.
    timeseries::normalize(r);
    return r;
}

} // namespace ami::ingest
