// SPDX-License-Identifier: Apache-2.0
#include "ami/common/csv.hpp"

#include "ami/common/error.hpp"

#include <cstdio>

namespace ami::csv {

std::vector<Record> parse(std::string_view text)
{
    std::vector<Record> records;
    std::size_t line = 1;
    std::size_t pos = 0;

    while (pos < text.size()) {
        Record record;
        record.line = line;
        std::string field;
        bool record_done = false;
        bool saw_content = false;

        while (!record_done) {
            if (pos < text.size() && text[pos] == '"') {
                saw_content = true;
                ++pos;
                for (;;) {
                    if (pos >= text.size())
                        throw Error(Errc::parse_error,
                                    "line " + std::to_string(record.line) + ": unterminated quoted field");
                    const char c = text[pos++];
                    if (c == '"') {
                        if (pos < text.size() && text[pos] == '"') {
                            field.push_back('"');
                            ++pos;
                            continue;
                        }
                        break;
                    }
                    if (c == '\n')
                        ++line;
                    field.push_back(c);
                }
            }
            while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
                saw_content = true;
                field.push_back(text[pos++]);
            }
            record.fields.push_back(std::move(field));
            field.clear();

            if (pos >= text.size()) {
                record_done = true;
            } else if (text[pos] == ',') {
                saw_content = true;
                ++pos;
            } else {
                if (text[pos] == '\r')
                    ++pos;
                if (pos < text.size() && text[pos] == '\n')
                    ++pos;
                ++line;
                record_done = true;
            }
        }
        if (saw_content)
            records.push_back(std::move(record));
    }
    return records;
}

std::string escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_decimal(double value)
{
    char buf[400];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    std::string out(buf);
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0')
            out.pop_back();
        if (out.back() == '.')
            out.pop_back();
    }
    if (out == "-0")
        out = "0";
    return out;
}

} // namespace ami::csv
