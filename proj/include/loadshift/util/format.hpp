#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace loadshift {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Strict parse; the whole (trimmed) field must be consumed.
bool try_parse_double(std::string_view text, double& out);
double parse_double(std::string_view text);
int parse_int(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char delim);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace loadshift
