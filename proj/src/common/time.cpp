// SPDX-License-Identifier: Apache-2.0
#include "ami/common/time.hpp"

#include <cstdio>

namespace ami {

namespace {

using namespace std::chrono;

bool read_digits(std::string_view text, std::size_t pos, std::size_t count, int& out)
{
    if (pos + count > text.size())
        return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9')
            return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

} // namespace

Timestamp system_now()
{
    return floor<seconds>(system_clock::now());
}

Timestamp min_timestamp()
{
    return sys_days{year{1} / January / 1};
}

Timestamp max_timestamp()
{
    return sys_days{year{9999} / December / 31} + hours{23} + minutes{59} + seconds{59};
}

std::optional<Timestamp> parse_rfc3339(std::string_view text)
{
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (text.size() < 20)
        return std::nullopt;
    if (!read_digits(text, 0, 4, y) || text[4] != '-' || !read_digits(text, 5, 2, mo) || text[7] != '-'
        || !read_digits(text, 8, 2, d))
        return std::nullopt;
    if (text[10] != 'T' && text[10] != 't')
        return std::nullopt;
    if (!read_digits(text, 11, 2, h) || text[13] != ':' || !read_digits(text, 14, 2, mi) || text[16] != ':'
        || !read_digits(text, 17, 2, s))
        return std::nullopt;

    std::size_t pos = 19;
    if (text[pos] == '.') {
        ++pos;
        const std::size_t first = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            ++pos;
        if (pos == first)
            return std::nullopt;
    }
    if (pos >= text.size())
        return std::nullopt;

    int offset_minutes = 0;
    const char zone = text[pos];
    if (zone == 'Z' || zone == 'z') {
        ++pos;
    } else if (zone == '+' || zone == '-') {
        int oh = 0, om = 0;
        if (!read_digits(text, pos + 1, 2, oh) || pos + 3 >= text.size() || text[pos + 3] != ':'
            || !read_digits(text, pos + 4, 2, om))
            return std::nullopt;
        if (oh > 23 || om > 59)
            return std::nullopt;
        offset_minutes = (oh * 60 + om) * (zone == '-' ? -1 : 1);
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != text.size())
        return std::nullopt;

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59)
        return std::nullopt;

    const Timestamp local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    const Timestamp utc = local - minutes{offset_minutes};
    if (utc < min_timestamp() || utc > max_timestamp())
        return std::nullopt;
    return utc;
}

std::string format_rfc3339(Timestamp ts)
{
    const auto day_point = floor<days>(ts);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{ts - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::optional<Timestamp> from_epoch_seconds(std::int64_t value)
{
    if (value < to_epoch_seconds(min_timestamp()) || value > to_epoch_seconds(max_timestamp()))
        return std::nullopt;
    return Timestamp{seconds{value}};
}

} // namespace ami
