#include "loadshift/util/csv.hpp"

namespace loadshift {

std::vector<CsvRow> parse_csv(std::string_view text, char delim) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t line = 1;
  row.line = line;

  auto end_row = [&] {
    if (row_has_content || !row.fields.empty()) {
      row.fields.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row = CsvRow{};
    field.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
      row_has_content = true;
    } else if (ch == delim) {
      row.fields.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (ch == '\r') {
      // swallowed; \n terminates the row
    } else if (ch == '\n') {
      end_row();
      ++line;
      row.line = line;
    } else {
      field.push_back(ch);
      row_has_content = true;
    }
  }
  end_row();
  return rows;
}

std::string csv_escape(std::string_view field, char delim) {
  if (field.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += '"';
  return out;
}

}  // namespace loadshift
