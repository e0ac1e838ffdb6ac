#pragma once

#include <vector>

#include "loadshift/core/date.hpp"

namespace loadshift {

struct CalendarInfo {
  Date date;
  unsigned month = 1;    // 1..12
  unsigned day = 1;      // 1..31
  unsigned weekday = 0;  // Monday = 0 ... Sunday = 6
  bool holiday = false;
};

CalendarInfo make_calendar_info(Date date, bool holiday);

// Observed US federal holidays for `year` (Saturday holidays observed on
// Friday, Sunday holidays on Monday). Juneteenth from 2021 on.
std::vector<Date> us_federal_holidays(int year);
bool is_us_federal_holiday(Date date);

}  // namespace loadshift
