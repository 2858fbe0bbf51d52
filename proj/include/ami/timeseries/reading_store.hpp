// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/common/append_log.hpp"
#include "ami/timeseries/sensor_reading.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ami::timeseries {

/// Inclusive on both ends. Operations throw Error(invalid_range) when start > end.
struct TimeRange {
    Timestamp start;
    Timestamp end;

    static TimeRange everything();
};

struct AggregateStats {
    std::string field_name;
    std::size_t count = 0;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> mean;
};

nlohmann::json to_json(const AggregateStats& stats);

inline constexpr std::string_view kCsvHeader = "device_id,captured_at,temperature,humidity,co2,pm1_0,pm2_5,pm10";

/// Store contract. Readings are validated upstream; ids start at 1 and increase by one
/// per insert. All operations are atomic with respect to each other.
class ReadingStore {
public:
    virtual ~ReadingStore() = default;

    virtual std::int64_t insert(SensorReading reading) = 0;

    /// Newest first by captured_at, ties broken by descending id. limit must be >= 1.
    virtual std::vector<StoredReading> query_recent(std::size_t limit) const = 0;

    /// Oldest first (captured_at, then id).
    virtual std::vector<StoredReading> query_range(const TimeRange& range) const = 0;

    virtual std::size_t size() const = 0;

    /// field_name must be one of the six measurements (Error(unknown_field) otherwise).
    AggregateStats aggregate(const TimeRange& range, std::string_view field_name) const;

    std::string export_csv(const TimeRange& range) const;
};

/// Parses export_csv output back into readings (flags recomputed).
std::vector<SensorReading> import_csv(std::string_view text);

class MemoryReadingStore final : public ReadingStore {
public:
    std::int64_t insert(SensorReading reading) override;
    std::vector<StoredReading> query_recent(std::size_t limit) const override;
    std::vector<StoredReading> query_range(const TimeRange& range) const override;
    std::size_t size() const override;

private:
    using Key = std::pair<std::int64_t, std::int64_t>; // (epoch seconds, id)

    mutable std::shared_mutex mutex_;
    std::vector<SensorReading> rows_; // index = id - 1
    std::set<Key> by_time_;
};

/// MemoryReadingStore fronted by a JSON-lines append log replayed at construction.
class FileReadingStore final : public ReadingStore {
public:
    explicit FileReadingStore(const std::filesystem::path& path);

    std::int64_t insert(SensorReading reading) override;
    std::vector<StoredReading> query_recent(std::size_t limit) const override;
    std::vector<StoredReading> query_range(const TimeRange& range) const override;
    std::size_t size() const override;

    void flush();

private:
    MemoryReadingStore memory_;
    std::mutex write_mutex_;
    std::unique_ptr<AppendLog> log_;
};

} // namespace ami::timeseries
