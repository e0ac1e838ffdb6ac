#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace loadshift {

struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the source text
  std::vector<std::string> fields;
};

// RFC-4180-ish reader: double-quoted fields may contain the delimiter and
// escaped quotes (""). Blank lines are skipped. Handles \r\n.
std::vector<CsvRow> parse_csv(std::string_view text, char delim = ',');

std::string csv_escape(std::string_view field, char delim = ',');

}  // namespace loadshift
