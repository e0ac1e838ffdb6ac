#include "loadshift/ingest/tables.hpp"

#include <algorithm>
#include <cmath>

#include "loadshift/core/frame.hpp"
#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::ingest {

Eigen::Index WideHourlyTable::find(Date date) const {
  const auto it = std::lower_bound(dates.begin(), dates.end(), date);
  if (it == dates.end() || *it != date) return -1;
  return it - dates.begin();
}

Eigen::Index WideHourlyTable::missing_count() const { return values.array().isNaN().count(); }

std::string write_wide_csv(const WideHourlyTable& table) {
  std::string out = "date";
  for (int h = 0; h < 24; ++h) out += "," + std::to_string(h);
  out += '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out += format_date(table.dates[i]);
    for (int h = 0; h < 24; ++h) {
      out += ',';
      const double v = table.values(static_cast<Eigen::Index>(i), h);
      if (!std::isnan(v)) out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

WideHourlyTable read_wide_csv(std::string_view text, TableKind kind, std::string field) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "wide table is empty");
  const auto& header = rows.front().fields;
  bool ok = header.size() == 25 && trim(header[0]) == "date";
  for (int h = 0; ok && h < 24; ++h) ok = trim(header[static_cast<std::size_t>(h + 1)]) == std::to_string(h);
  if (!ok) throw Error(ErrorCode::kSchema, "wide table header must be date,0,1,...,23");

  WideHourlyTable t;
  t.kind = kind;
  t.field = std::move(field);
  t.values.resize(static_cast<Eigen::Index>(rows.size() - 1), 24);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != 25) {
      throw Error(ErrorCode::kSchema, "line " + std::to_string(rows[i].line) + ": expected 25 fields");
    }
    const Date d = parse_date(trim(f[0]));
    if (!t.dates.empty() && !(t.dates.back() < d)) {
      throw Error(ErrorCode::kSchema, "wide table dates must be unique and sorted at " + format_date(d));
    }
    t.dates.push_back(d);
    for (int h = 0; h < 24; ++h) {
      const auto cell = trim(f[static_cast<std::size_t>(h + 1)]);
      t.values(static_cast<Eigen::Index>(i - 1), h) = cell.empty() ? kMissing : parse_double(cell);
    }
  }
  return t;
}

LongRecordTable flatten(const WideHourlyTable& table) {
  LongRecordTable out;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (int h = 0; h < 24; ++h) {
      const double v = table.values(static_cast<Eigen::Index>(i), h);
      if (!std::isnan(v)) out.records.push_back({table.dates[i], h, 0, table.field, v, table.location});
    }
  }
  return out;
}

void QcReport::merge(const QcReport& later) {
  outliers.insert(outliers.end(), later.outliers.begin(), later.outliers.end());
  gaps_filled.insert(gaps_filled.end(), later.gaps_filled.begin(), later.gaps_filled.end());
  duplicates_dropped += later.duplicates_dropped;
  std::erase_if(unresolved, [&](const QcCell& c) {
    return std::any_of(later.gaps_filled.begin(), later.gaps_filled.end(),
                       [&](const QcFill& f) { return f.date == c.date && f.hour == c.hour; });
  });
  for (const auto& c : later.unresolved) {
    if (std::find(unresolved.begin(), unresolved.end(), c) == unresolved.end()) unresolved.push_back(c);
  }
}

std::string write_qc_report(const QcReport& report) {
  std::string out = "record,date,hour,value,detail\n";
  for (const auto& o : report.outliers) {
    out += "outlier," + format_date(o.date) + "," + std::to_string(o.hour) + "," + format_double(o.original) + "," +
           csv_escape(o.action) + "\n";
  }
  for (const auto& f : report.gaps_filled) {
    out += "filled," + format_date(f.date) + "," + std::to_string(f.hour) + "," + format_double(f.value) + "," +
           csv_escape(f.method) + "\n";
  }
  for (const auto& u : report.unresolved) {
    out += "unresolved," + format_date(u.date) + "," + std::to_string(u.hour) + ",,\n";
  }
  out += "duplicates_dropped,,," + std::to_string(report.duplicates_dropped) + ",\n";
  return out;
}

QcReport read_qc_report(std::string_view text) {
  QcReport r;
  const auto rows = parse_csv(text);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != 5) throw Error(ErrorCode::kSchema, "qc report line " + std::to_string(rows[i].line));
    if (f[0] == "outlier") {
      r.outliers.push_back({parse_date(f[1]), parse_int(f[2]), parse_double(f[3]), f[4]});
    } else if (f[0] == "filled") {
      r.gaps_filled.push_back({parse_date(f[1]), parse_int(f[2]), parse_double(f[3]), f[4]});
    } else if (f[0] == "unresolved") {
      r.unresolved.push_back({parse_date(f[1]), parse_int(f[2])});
    } else if (f[0] == "duplicates_dropped") {
      r.duplicates_dropped = static_cast<std::size_t>(parse_int(f[3]));
    } else {
      throw Error(ErrorCode::kSchema, "unknown qc record '" + f[0] + "'");
    }
  }
  return r;
}

}  // namespace loadshift::ingest
