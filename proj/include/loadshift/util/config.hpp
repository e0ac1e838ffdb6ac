#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loadshift {

/// INI-flavoured key/value text:
///
///     # comment
///     top_level = 1
///     [section]
///     key = value
///     key = repeated values are kept in order
///
/// Keys before any section header live in section "".
class KeyValueConfig {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  std::optional<std::string> get(std::string_view section, std::string_view key) const;
  std::string get_or(std::string_view section, std::string_view key, std::string fallback) const;
  std::string require(std::string_view section, std::string_view key) const;
  double get_double(std::string_view section, std::string_view key, double fallback) const;
  long get_int(std::string_view section, std::string_view key, long fallback) const;
  bool get_bool(std::string_view section, std::string_view key, bool fallback) const;
  std::vector<std::string> get_all(std::string_view section, std::string_view key) const;

  bool has_section(std::string_view section) const;
  // Distinct section names in first-appearance order.
  std::vector<std::string> sections() const;

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

std::vector<double> parse_double_list(std::string_view text, char delim = ',');

}  // namespace loadshift
