// SPDX-License-Identifier: Apache-2.0
#include "ami/timeseries/reading_store.hpp"

#include "ami/common/csv.hpp"
#include "ami/common/error.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <mutex>

namespace ami::timeseries {

namespace {

void check_range(const TimeRange& range)
{
    if (range.start > range.end)
        throw Error(Errc::invalid_range,
                    "invalid range: start " + format_rfc3339(range.start) + " is after end " + format_rfc3339(range.end));
}

double parse_csv_number(const std::string& text, std::size_t line, std::string_view column)
{
    double value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw Error(Errc::parse_error,
                    "line " + std::to_string(line) + ": column " + std::string(column) + " is not a number");
    return value;
}

} // namespace

TimeRange TimeRange::everything()
{
    return {min_timestamp(), max_timestamp()};
}

nlohmann::json to_json(const AggregateStats& stats)
{
    nlohmann::json j = {{"field", stats.field_name}, {"count", stats.count}};
    if (stats.count > 0) {
        j["min"] = *stats.min;
        j["max"] = *stats.max;
        j["mean"] = *stats.mean;
    }
    return j;
}

AggregateStats ReadingStore::aggregate(const TimeRange& range, std::string_view field_name) const
{
    const auto field = parse_measurement(field_name);
    if (!field)
        throw Error(Errc::unknown_field, "unknown field: " + std::string(field_name));
    check_range(range);

    AggregateStats stats;
    stats.field_name = std::string(field_name);
    const auto rows = query_range(range);
    if (rows.empty())
        return stats;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0;
    for (const auto& row : rows) {
        const double v = row.reading.value(*field);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    stats.count = rows.size();
    stats.min = lo;
    stats.max = hi;
    // Rounding can push the mean of equal values a ulp outside [min, max].
    stats.mean = std::clamp(sum / static_cast<double>(rows.size()), lo, hi);
    return stats;
}

std::string ReadingStore::export_csv(const TimeRange& range) const
{
    check_range(range);
    std::string out(kCsvHeader);
    out.push_back('\n');
    for (const auto& row : query_range(range)) {
        const auto& r = row.reading;
        out += csv::escape(r.device_id);
        out.push_back(',');
        out += format_rfc3339(r.captured_at);
        for (auto m : kMeasurements) {
            out.push_back(',');
            out += csv::format_decimal(r.value(m));
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<SensorReading> import_csv(std::string_view text)
{
    const auto records = csv::parse(text);
    if (records.empty())
        throw Error(Errc::parse_error, "missing CSV header");

    std::string header;
    for (std::size_t i = 0; i < records.front().fields.size(); ++i) {
        if (i)
            header.push_back(',');
        header += records.front().fields[i];
    }
    if (header != kCsvHeader)
        throw Error(Errc::parse_error, "line 1: unexpected header: " + header);

    std::vector<SensorReading> readings;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.fields.size() != 8)
            throw Error(Errc::parse_error, "line " + std::to_string(rec.line) + ": expected 8 columns");
        SensorReading r;
        r.device_id = rec.fields[0];
        const auto ts = parse_rfc3339(rec.fields[1]);
        if (!ts)
            throw Error(Errc::parse_error, "line " + std::to_string(rec.line) + ": bad captured_at");
        r.captured_at = *ts;
        for (std::size_t k = 0; k < kMeasurements.size(); ++k)
            r.value(kMeasurements[k]) = parse_csv_number(rec.fields[k + 2], rec.line, measurement_name(kMeasurements[k]));
        refresh_flags(r);
        readings.push_back(std::move(r));
    }
    return readings;
}

// --- MemoryReadingStore ---

std::int64_t MemoryReadingStore::insert(SensorReading reading)
{
    std::unique_lock lock(mutex_);
    const auto id = static_cast<std::int64_t>(rows_.size()) + 1;
    by_time_.emplace(to_epoch_seconds(reading.captured_at), id);
    rows_.push_back(std::move(reading));
    return id;
}

std::vector<StoredReading> MemoryReadingStore::query_recent(std::size_t limit) const
{
    if (limit == 0)
        throw Error(Errc::invalid_argument, "limit must be >= 1");
    std::shared_lock lock(mutex_);
    std::vector<StoredReading> out;
    out.reserve(std::min(limit, rows_.size()));
    for (auto it = by_time_.rbegin(); it != by_time_.rend() && out.size() < limit; ++it)
        out.push_back({it->second, rows_[static_cast<std::size_t>(it->second - 1)]});
    return out;
}

std::vector<StoredReading> MemoryReadingStore::query_range(const TimeRange& range) const
{
    check_range(range);
    std::shared_lock lock(mutex_);
    std::vector<StoredReading> out;
    const auto first = by_time_.lower_bound({to_epoch_seconds(range.start), std::numeric_limits<std::int64_t>::min()});
    const auto last = by_time_.upper_bound({to_epoch_seconds(range.end), std::numeric_limits<std::int64_t>::max()});
    for (auto it = first; it != last; ++it)
        out.push_back({it->second, rows_[static_cast<std::size_t>(it->second - 1)]});
    return out;
}

std::size_t MemoryReadingStore::size() const
{
    std::shared_lock lock(mutex_);
    return rows_.size();
}

// --- FileReadingStore ---

FileReadingStore::FileReadingStore(const std::filesystem::path& path)
{
    log_ = std::make_unique<AppendLog>(path, [this](const nlohmann::json& record, std::size_t) {
        auto reading = reading_from_json(record);
        if (auto violation = check_bounds(reading))
            throw Error(Errc::storage_failure, "stored reading out of bounds: " + violation->message);
        memory_.insert(std::move(reading));
    });
}

std::int64_t FileReadingStore::insert(SensorReading reading)
{
    std::lock_guard lock(write_mutex_);
    log_->append(to_json(reading));
    return memory_.insert(std::move(reading));
}

std::vector<StoredReading> FileReadingStore::query_recent(std::size_t limit) const
{
    return memory_.query_recent(limit);
}

std::vector<StoredReading> FileReadingStore::query_range(const TimeRange& range) const
{
    return memory_.query_range(range);
}

std::size_t FileReadingStore::size() const
{
    return memory_.size();
}

void FileReadingStore::flush()
{
    log_->flush();
}

} // namespace ami::timeseries
