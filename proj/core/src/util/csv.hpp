#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lsa::util {

using CsvRow = std::vector<std::string>;

/// RFC 4180: quoted fields may contain commas, quotes ("") and newlines.
/// Accepts LF or CRLF line endings; a trailing newline does not add a row.
std::vector<CsvRow> parse_csv(std::string_view text);

std::string csv_field(std::string_view value);
std::string csv_line(const CsvRow& row);

}  // namespace lsa::util
