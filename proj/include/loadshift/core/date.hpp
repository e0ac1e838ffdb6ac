#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace loadshift {

using Date = std::chrono::sys_days;

Date make_date(int year, unsigned month, unsigned day);

// ISO-8601 YYYY-MM-DD; throws on malformed or invalid calendar dates.
Date parse_date(std::string_view text);

// Accepts the formats used by source descriptors: %Y-%m-%d, %m/%d/%Y,
// %d/%m/%Y, %Y%m%d, %Y/%m/%d.
std::optional<Date> try_parse_date(std::string_view text, std::string_view format);

std::string format_date(Date date);

int year_of(Date date);
unsigned month_of(Date date);
unsigned day_of(Date date);

// Monday = 0 ... Sunday = 6.
unsigned weekday_index(Date date);

struct IsoWeek {
  int year = 0;
  unsigned week = 0;     // 1..53
  unsigned weekday = 0;  // Monday = 1 ... Sunday = 7
};

IsoWeek iso_week(Date date);
std::optional<Date> from_iso_week(int year, unsigned week, unsigned weekday);

}  // namespace loadshift
