// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ami::csv {

struct Record {
    std::size_t line = 0; // 1-based line on which the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain commas, quotes ("") and newlines.
/// Accepts LF or CRLF line endings; blank lines are skipped.
/// Throws ami::Error(parse_error) naming the line of an unterminated quote.
std::vector<Record> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Fixed-point with at most six decimals and no trailing zeros ("21.5", "600", "0.000001").
std::string format_decimal(double value);

} // namespace ami::csv
