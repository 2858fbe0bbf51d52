// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/timeseries/sensor_reading.hpp"

#include <nlohmann/json.hpp>

#include <variant>

namespace ami::ingest {

using timeseries::FieldViolation;
using timeseries::SensorReading;

/// Turns an ingestion body into a normalized reading, or names the first offending field.
/// Checks run in field order: presence and type for every field, then bounds.
std::variant<SensorReading, FieldViolation> validate_sensor_payload(const nlohmann::json& body);

} // namespace ami::ingest
