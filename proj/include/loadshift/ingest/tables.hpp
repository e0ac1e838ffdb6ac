#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include "loadshift/core/date.hpp"
#include "loadshift/ingest/schema.hpp"

namespace loadshift::ingest {

struct LongRecord {
  Date date;
  int hour = 0;    // 0..23
  int minute = 0;  // sub-hourly sources only
  std::string field;
  double value = 0.0;
  std::string location;
};

struct LongRecordTable {
  std::vector<LongRecord> records;
};

using HourlyMatrix = Eigen::Matrix<double, Eigen::Dynamic, 24, Eigen::RowMajor>;

/// One row per date, one column per hour. Missing cells are NaN.
struct WideHourlyTable {
  TableKind kind = TableKind::kOther;
  std::string field;
  std::string location;
  std::vector<Date> dates;  // unique, sorted
  HourlyMatrix values;

  std::size_t rows() const { return dates.size(); }
  // Row index of `date` or -1.
  Eigen::Index find(Date date) const;
  Eigen::Index missing_count() const;
};

// Canonical wide CSV: header "date,0,1,...,23", ISO dates, empty = missing.
std::string write_wide_csv(const WideHourlyTable& table);
WideHourlyTable read_wide_csv(std::string_view text, TableKind kind = TableKind::kOther,
                              std::string field = {});

// Non-missing cells back to long records, in (date, hour) order.
LongRecordTable flatten(const WideHourlyTable& table);

struct QcOutlier {
  Date date;
  int hour = 0;
  double original = 0.0;
  std::string action;
};

struct QcFill {
  Date date;
  int hour = 0;
  double value = 0.0;
  std::string method;  // "interpolated" or "backup"
};

struct QcCell {
  Date date;
  int hour = 0;
  friend bool operator==(const QcCell&, const QcCell&) = default;
};

/// Audit trail of every change QC makes to a table.
struct QcReport {
  std::vector<QcOutlier> outliers;
  std::vector<QcFill> gaps_filled;
  std::size_t duplicates_dropped = 0;
  std::vector<QcCell> unresolved;

  bool has_mutations() const { return !outliers.empty() || !gaps_filled.empty() || duplicates_dropped > 0; }
  // Appends a later stage's report; cells the later stage filled are no
  // longer unresolved.
  void merge(const QcReport& later);
};

std::string write_qc_report(const QcReport& report);
QcReport read_qc_report(std::string_view text);

}  // namespace loadshift::ingest
