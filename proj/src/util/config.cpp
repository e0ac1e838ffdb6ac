#include "loadshift/util/config.hpp"

#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift {

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": unterminated section");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    auto value = trim(line.substr(eq + 1));
    // Trailing comments need whitespace before '#', so values like "#fff" survive.
    if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
      value = trim(value.substr(0, hash));
    }
    cfg.entries_.push_back({section, std::string(trim(line.substr(0, eq))), std::string(value), line_no});
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) { return parse(read_file(path)); }

std::optional<std::string> KeyValueConfig::get(std::string_view section, std::string_view key) const {
  std::optional<std::string> found;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) found = e.value;  // last wins
  }
  return found;
}

std::string KeyValueConfig::get_or(std::string_view section, std::string_view key,
                                   std::string fallback) const {
  auto v = get(section, key);
  return v ? *v : std::move(fallback);
}

std::string KeyValueConfig::require(std::string_view section, std::string_view key) const {
  auto v = get(section, key);
  if (!v) {
    throw Error(ErrorCode::kConfig,
                "missing key '" + std::string(key) + "' in section [" + std::string(section) + "]");
  }
  return *v;
}

double KeyValueConfig::get_double(std::string_view section, std::string_view key, double fallback) const {
  auto v = get(section, key);
  return v ? parse_double(*v) : fallback;
}

long KeyValueConfig::get_int(std::string_view section, std::string_view key, long fallback) const {
  auto v = get(section, key);
  return v ? parse_int(*v) : fallback;
}

bool KeyValueConfig::get_bool(std::string_view section, std::string_view key, bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  const auto s = to_lower(*v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::kConfig, "not a boolean: " + *v);
}

std::vector<std::string> KeyValueConfig::get_all(std::string_view section, std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) out.push_back(e.value);
  }
  return out;
}

bool KeyValueConfig::has_section(std::string_view section) const {
  for (const auto& e : entries_) {
    if (e.section == section) return true;
  }
  return false;
}

std::vector<std::string> KeyValueConfig::sections() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    bool seen = false;
    for (const auto& s : out) seen = seen || s == e.section;
    if (!seen) out.push_back(e.section);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text, char delim) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, delim)) out.push_back(parse_double(part));
  return out;
}

}  // namespace loadshift
