// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ami {

/// UTC instant at second resolution.
using Timestamp = std::chrono::sys_seconds;

/// Injectable wall clock; tests pass a fixed or stepping function.
using Clock = std::function<Timestamp()>;

Timestamp system_now();

/// Earliest and latest instants that round-trip through RFC 3339 (years 0001..9999).
Timestamp min_timestamp();
Timestamp max_timestamp();

/// Accepts `YYYY-MM-DDTHH:MM:SS[.fraction](Z|+HH:MM|-HH:MM)`; fractions are truncated.
std::optional<Timestamp> parse_rfc3339(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_rfc3339(Timestamp ts);

std::optional<Timestamp> from_epoch_seconds(std::int64_t seconds);

inline std::int64_t to_epoch_seconds(Timestamp ts)
{
    return ts.time_since_epoch().count();
}

} // namespace ami
