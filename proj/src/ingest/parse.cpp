#include "loadshift/ingest/parse.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "loadshift/core/frame.hpp"
#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::ingest {

namespace {

std::size_t require_column(const std::vector<std::string>& header, const std::string& name,
                           const std::string& source) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw Error(ErrorCode::kSchema, "header mismatch in " + source + ": missing column '" + name + "'");
}

// "7", "07", "07:00", "HE07" all read as 7.
std::optional<int> parse_hour_label(std::string_view text) {
  text = trim(text);
  if (text.starts_with("HE") || text.starts_with("he")) text.remove_prefix(2);
  if (const auto colon = text.find(':'); colon != std::string_view::npos) text = text.substr(0, colon);
  if (text.empty() || text.size() > 2) return std::nullopt;
  int h = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    h = h * 10 + (c - '0');
  }
  return h;
}

struct Stamp {
  Date date;
  int hour = 0;
  int minute = 0;
};

std::optional<Stamp> parse_timestamp(std::string_view text, std::string_view date_format) {
  text = trim(text);
  const auto sep = text.find_first_of(" T");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto date = try_parse_date(text.substr(0, sep), date_format);
  if (!date) return std::nullopt;
  const auto parts = split(text.substr(sep + 1), ':');
  if (parts.size() < 2) return std::nullopt;
  const auto h = parse_hour_label(parts[0]);
  const auto m = parse_hour_label(parts[1]);
  if (!h || !m || *h > 23 || *m > 59) return std::nullopt;
  return Stamp{*date, *h, *m};
}

}  // namespace

ParseResult parse_source(std::string_view bytes, const SourceDescriptor& schema) {
  if (trim(bytes).empty()) throw Error(ErrorCode::kEmptyInput, "source '" + schema.name + "' is empty");
  const auto rows = parse_csv(bytes, schema.delimiter);
  const auto& header = rows.front().fields;

  const bool stamped = !schema.timestamp_column.empty();
  const auto ts_col = stamped ? require_column(header, schema.timestamp_column, schema.name) : 0;
  const auto date_col = stamped ? 0 : require_column(header, schema.date_column, schema.name);
  const auto hour_col = stamped ? 0 : require_column(header, schema.hour_column, schema.name);
  const auto value_col = require_column(header, schema.value_column, schema.name);
  const std::optional<std::size_t> loc_col =
      schema.location_column.empty() ? std::nullopt
                                     : std::optional(require_column(header, schema.location_column, schema.name));

  ParseResult out;
  if (rows.size() == 1 && !schema.allow_empty) {
    throw Error(ErrorCode::kEmptyInput, "source '" + schema.name + "' has a header but no rows");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const auto line = rows[r].line;
    if (f.size() != header.size()) {
      out.rejects.push_back({line, "expected " + std::to_string(header.size()) + " fields, got " +
                                       std::to_string(f.size())});
      continue;
    }
    Stamp stamp;
    if (stamped) {
      const auto s = parse_timestamp(f[ts_col], schema.date_format);
      if (!s) {
        out.rejects.push_back({line, "bad timestamp '" + f[ts_col] + "'"});
        continue;
      }
      stamp = *s;
    } else {
      const auto d = try_parse_date(trim(f[date_col]), schema.date_format);
      if (!d) {
        out.rejects.push_back({line, "bad date '" + f[date_col] + "'"});
        continue;
      }
      const auto h = parse_hour_label(f[hour_col]);
      const int lo = schema.hour_convention == HourConvention::kEnding ? 1 : 0;
      if (!h || *h < lo || *h > lo + 23) {
        out.rejects.push_back({line, "bad hour '" + f[hour_col] + "'"});
        continue;
      }
      stamp = {*d, *h - lo, 0};
    }
    double raw = 0.0;
    if (!try_parse_double(f[value_col], raw)) {
      out.rejects.push_back({line, "non-numeric value '" + f[value_col] + "'"});
      continue;
    }
    // Fixed-offset timezone shift with date rollover.
    int hour = stamp.hour + schema.timezone_offset_hours;
    Date date = stamp.date;
    const int day_shift = hour >= 0 ? hour / 24 : -((23 - hour) / 24);
    hour -= 24 * day_shift;
    date += std::chrono::days{day_shift};

    out.table.records.push_back({date, hour, stamp.minute, schema.field,
                                 raw * schema.unit_factor + schema.unit_offset,
                                 loc_col ? std::string(trim(f[*loc_col])) : schema.location});
  }
  return out;
}

namespace {

void require_single_series(const LongRecordTable& records, const char* op) {
  if (records.records.empty()) return;
  const auto& first = records.records.front();
  for (const auto& r : records.records) {
    if (r.field != first.field) {
      throw Error(ErrorCode::kMixedField, std::string(op) + ": fields '" + first.field + "' and '" + r.field + "'");
    }
    if (r.location != first.location) {
      throw Error(ErrorCode::kMixedField,
                  std::string(op) + ": locations '" + first.location + "' and '" + r.location + "'");
    }
  }
}

std::vector<Date> distinct_dates(const LongRecordTable& records) {
  std::vector<Date> dates;
  for (const auto& r : records.records) dates.push_back(r.date);
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  return dates;
}

WideHourlyTable empty_like(const LongRecordTable& records) {
  WideHourlyTable t;
  t.dates = distinct_dates(records);
  if (!records.records.empty()) {
    t.field = records.records.front().field;
    t.location = records.records.front().location;
    t.kind = kind_for_field(t.field);
  }
  t.values = HourlyMatrix::Constant(static_cast<Eigen::Index>(t.dates.size()), 24, kMissing);
  return t;
}

}  // namespace

PivotResult pivot_wide(const LongRecordTable& records) {
  require_single_series(records, "pivot_wide");
  PivotResult out;
  out.table = empty_like(records);
  for (const auto& r : records.records) {
    if (r.hour < 0 || r.hour > 23) throw Error(ErrorCode::kSchema, "hour out of range");
    double& cell = out.table.values(out.table.find(r.date), r.hour);
    if (std::isnan(cell)) {
      cell = r.value;
    } else {
      ++out.report.duplicates_dropped;
    }
  }
  return out;
}

WideHourlyTable resample_weather_hourly(const LongRecordTable& minute_records) {
  require_single_series(minute_records, "resample_weather_hourly");
  auto table = empty_like(minute_records);
  HourlyMatrix sums = HourlyMatrix::Zero(table.values.rows(), 24);
  Eigen::Matrix<int, Eigen::Dynamic, 24, Eigen::RowMajor> counts =
      Eigen::Matrix<int, Eigen::Dynamic, 24, Eigen::RowMajor>::Zero(table.values.rows(), 24);
  for (const auto& r : minute_records.records) {
    const auto i = table.find(r.date);
    sums(i, r.hour) += r.value;
    counts(i, r.hour) += 1;
  }
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (int h = 0; h < 24; ++h) {
      if (counts(i, h) > 0) table.values(i, h) = sums(i, h) / counts(i, h);
    }
  }
  return table;
}

}  // namespace loadshift::ingest
