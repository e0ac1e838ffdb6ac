#include "loadshift/core/date.hpp"

#include <charconv>

#include "loadshift/util/error.hpp"

namespace loadshift {

using namespace std::chrono;

Date make_date(int year, unsigned month, unsigned day) {
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!ymd.ok()) {
    throw Error(ErrorCode::kSchema, "invalid calendar date " + std::to_string(year) + "-" +
                                        std::to_string(month) + "-" + std::to_string(day));
  }
  return sys_days{ymd};
}

namespace {

bool read_number(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  return std::from_chars(text.data() + pos, text.data() + pos + len, out).ec == std::errc();
}

// Splits "a<sep>b<sep>c" into integers with no length constraints.
bool read_triplet(std::string_view text, char sep, int& a, int& b, int& c) {
  const auto p1 = text.find(sep);
  if (p1 == std::string_view::npos) return false;
  const auto p2 = text.find(sep, p1 + 1);
  if (p2 == std::string_view::npos) return false;
  return read_number(text, 0, p1, a) && read_number(text, p1 + 1, p2 - p1 - 1, b) &&
         read_number(text, p2 + 1, text.size() - p2 - 1, c);
}

std::optional<Date> checked(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  const year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                           std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

}  // namespace

std::optional<Date> try_parse_date(std::string_view text, std::string_view format) {
  int y = 0, m = 0, d = 0;
  if (format == "%Y-%m-%d") {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!read_number(text, 0, 4, y) || !read_number(text, 5, 2, m) || !read_number(text, 8, 2, d)) {
      return std::nullopt;
    }
    return checked(y, m, d);
  }
  if (format == "%Y/%m/%d") {
    if (!read_triplet(text, '/', y, m, d)) return std::nullopt;
    return checked(y, m, d);
  }
  if (format == "%m/%d/%Y") {
    if (!read_triplet(text, '/', m, d, y)) return std::nullopt;
    return checked(y, m, d);
  }
  if (format == "%d/%m/%Y") {
    if (!read_triplet(text, '/', d, m, y)) return std::nullopt;
    return checked(y, m, d);
  }
  if (format == "%Y%m%d") {
    if (text.size() != 8 || !read_number(text, 0, 4, y) || !read_number(text, 4, 2, m) ||
        !read_number(text, 6, 2, d)) {
      return std::nullopt;
    }
    return checked(y, m, d);
  }
  throw Error(ErrorCode::kSchema, "unsupported date format " + std::string(format));
}

Date parse_date(std::string_view text) {
  auto date = try_parse_date(text, "%Y-%m-%d");
  if (!date) throw Error(ErrorCode::kSchema, "not an ISO date: '" + std::string(text) + "'");
  return *date;
}

std::string format_date(Date date) {
  const year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int year_of(Date date) { return static_cast<int>(year_month_day{date}.year()); }
unsigned month_of(Date date) { return static_cast<unsigned>(year_month_day{date}.month()); }
unsigned day_of(Date date) { return static_cast<unsigned>(year_month_day{date}.day()); }

unsigned weekday_index(Date date) { return weekday{date}.iso_encoding() - 1; }

namespace {

// Monday of ISO week 1: the week containing January 4th.
Date iso_week_one_monday(int year) {
  const Date jan4 = make_date(year, 1, 4);
  return jan4 - days{weekday_index(jan4)};
}

}  // namespace

IsoWeek iso_week(Date date) {
  const int y = year_of(date);
  int iso_year = y;
  Date start = iso_week_one_monday(y);
  if (date < start) {
    iso_year = y - 1;
    start = iso_week_one_monday(iso_year);
  } else {
    const Date next = iso_week_one_monday(y + 1);
    if (date >= next) {
      iso_year = y + 1;
      start = next;
    }
  }
  const auto offset = (date - start).count();
  return {iso_year, static_cast<unsigned>(offset / 7 + 1), weekday_index(date) + 1};
}

std::optional<Date> from_iso_week(int year, unsigned week, unsigned weekday) {
  if (week < 1 || week > 53 || weekday < 1 || weekday > 7) return std::nullopt;
  const Date d = iso_week_one_monday(year) + days{7 * (week - 1) + (weekday - 1)};
  if (iso_week(d).year != year) return std::nullopt;  // week 53 in a 52-week year
  return d;
}

}  // namespace loadshift
