// SPDX-License-Identifier: Apache-2.0
#include "ami/common/time.hpp"

#include <doctest.h>

#include <random>

using namespace ami;

TEST_CASE("rfc3339 parse and format")
{
    const auto ts = parse_rfc3339("2025-01-01T00:00:00Z");
    REQUIRE(ts);
    CHECK(to_epoch_seconds(*ts) == 1735689600);
    CHECK(format_rfc3339(*ts) == "2025-01-01T00:00:00Z");

    SUBCASE("offsets normalise to UTC")
    {
        CHECK(parse_rfc3339("2025-01-01T02:30:00+02:30") == ts);
        CHECK(parse_rfc3339("2024-12-31T23:00:00-01:00") == ts);
    }
    SUBCASE("fractions truncate, lowercase separators accepted")
    {
        CHECK(parse_rfc3339("2025-01-01T00:00:00.999Z") == ts);
        CHECK(parse_rfc3339("2025-01-01t00:00:00z") == ts);
    }
    SUBCASE("rejects malformed input")
    {
        for (const char* bad : {"", "2025-01-01", "2025-13-01T00:00:00Z", "2025-02-30T00:00:00Z", "2025-01-01T24:00:00Z",
                                "2025-01-01T00:00:00", "2025-01-01T00:00:00+2:00", "2025-01-01 00:00:00Z",
                                "2025-01-01T00:00:00.Z", "x2025-01-01T00:00:00Z", "2025-01-01T00:00:00Zjunk"})
            CHECK_MESSAGE(!parse_rfc3339(bad), bad);
    }
}

TEST_CASE("rfc3339 round trip over the representable range")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> dist(to_epoch_seconds(min_timestamp()), to_epoch_seconds(max_timestamp()));
    for (int i = 0; i < 2000; ++i) {
        const auto ts = *from_epoch_seconds(dist(rng));
        CHECK(parse_rfc3339(format_rfc3339(ts)) == ts);
    }
    CHECK(format_rfc3339(min_timestamp()) == "0001-01-01T00:00:00Z");
    CHECK(format_rfc3339(max_timestamp()) == "9999-12-31T23:59:59Z");
    CHECK(!from_epoch_seconds(to_epoch_seconds(max_timestamp()) + 1));
    CHECK(!from_epoch_seconds(to_epoch_seconds(min_timestamp()) - 1));
}
