#include "loadshift/core/calendar.hpp"

#include <algorithm>

namespace loadshift {

using namespace std::chrono;

CalendarInfo make_calendar_info(Date date, bool holiday) {
  return {date, month_of(date), day_of(date), weekday_index(date), holiday};
}

namespace {

Date nth_weekday(int year, unsigned month, unsigned iso_weekday, unsigned n) {
  const year_month_weekday ymw{std::chrono::year{year}, std::chrono::month{month},
                               std::chrono::weekday{iso_weekday % 7}[n]};
  return sys_days{ymw};
}

Date last_weekday(int year, unsigned month, unsigned iso_weekday) {
  const year_month_weekday_last ymwl{std::chrono::year{year}, std::chrono::month{month},
                                     std::chrono::weekday{iso_weekday % 7}[last]};
  return sys_days{ymwl};
}

Date observed(Date d) {
  const auto wd = weekday_index(d);
  if (wd == 5) return d - days{1};
  if (wd == 6) return d + days{1};
  return d;
}

}  // namespace

std::vector<Date> us_federal_holidays(int year) {
  std::vector<Date> out{
      observed(make_date(year, 1, 1)),
      nth_weekday(year, 1, 1, 3),   // MLK day
      nth_weekday(year, 2, 1, 3),   // Washington's birthday
      last_weekday(year, 5, 1),     // Memorial day
      observed(make_date(year, 7, 4)),
      nth_weekday(year, 9, 1, 1),   // Labor day
      nth_weekday(year, 10, 1, 2),  // Columbus day
      observed(make_date(year, 11, 11)),
      nth_weekday(year, 11, 4, 4),  // Thanksgiving
      observed(make_date(year, 12, 25)),
  };
  if (year >= 2021) out.push_back(observed(make_date(year, 6, 19)));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_us_federal_holiday(Date date) {
  const int y = year_of(date);
  for (int yy : {y, y + 1}) {  // Jan 1 of next year may be observed on Dec 31
    const auto list = us_federal_holidays(yy);
    if (std::find(list.begin(), list.end(), date) != list.end()) return true;
  }
  return false;
}

}  // namespace loadshift
