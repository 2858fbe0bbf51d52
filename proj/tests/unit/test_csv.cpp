// SPDX-License-Identifier: Apache-2.0
#include "ami/common/csv.hpp"
#include "ami/common/error.hpp"

#include <doctest.h>

#include <random>

using namespace ami;

TEST_CASE("csv parse handles quotes, CRLF and blank lines")
{
    const auto recs = csv::parse("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\n\n\"multi\nline\",z\n");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].fields == std::vector<std::string>{"a", "b"});
    CHECK(recs[1].fields == std::vector<std::string>{"x,1", "say \"hi\""});
    CHECK(recs[1].line == 2);
    CHECK(recs[2].fields == std::vector<std::string>{"multi\nline", "z"});
    CHECK(recs[2].line == 4);
}

TEST_CASE("csv unterminated quote names the line")
{
    try {
        csv::parse("a\nb\n\"open");
        FAIL("expected parse_error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::parse_error);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("csv escape round trips arbitrary fields")
{
    std::mt19937 rng(3);
    const std::string alphabet = "ab,\"\n\r x";
    for (int i = 0; i < 500; ++i) {
        std::vector<std::string> fields(1 + rng() % 4);
        for (auto& f : fields)
            for (int n = rng() % 6; n > 0; --n)
                f += alphabet[rng() % alphabet.size()];
        // A record that is a single empty field is indistinguishable from a blank line.
        if (fields.size() == 1 && fields[0].empty())
            fields[0] = "a";
        std::string line;
        for (std::size_t k = 0; k < fields.size(); ++k)
            line += (k ? "," : "") + csv::escape(fields[k]);
        const auto recs = csv::parse(line + "\n");
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].fields == fields);
    }
}

TEST_CASE("format_decimal uses at most six decimals without trailing zeros")
{
    CHECK(csv::format_decimal(21.5) == "21.5");
    CHECK(csv::format_decimal(600) == "600");
    CHECK(csv::format_decimal(0.000001) == "0.000001");
    CHECK(csv::format_decimal(-0.0) == "0");
    CHECK(csv::format_decimal(-0.0000001) == "0");
    CHECK(csv::format_decimal(-12.25) == "-12.25");
    CHECK(csv::format_decimal(1.23456789) == "1.234568");
}
