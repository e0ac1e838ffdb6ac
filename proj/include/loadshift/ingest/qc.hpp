#pragma once

#include <optional>

#include "loadshift/ingest/tables.hpp"

namespace loadshift::ingest {

struct QcOutlierRule {
  double upper_ratio = 5.0;  // flag value > upper_ratio x daily mean
  double lower_ratio = 0.2;  // flag value < lower_ratio x daily mean
  int min_present = 4;       // days with fewer non-missing cells are skipped
};

struct QcResult {
  WideHourlyTable table;
  QcReport report;
};

// Whether the ratio-to-daily-mean rule is meaningful for this kind of data.
// Prices (spikes, negative LMPs) and temperatures (sign changes) are passed
// through unflagged.
bool outlier_rule_applies(TableKind kind);

/// Flags cells strictly above 5x or strictly below 0.2x their day's mean
/// (over non-missing cells) and sets them missing. Flagging repeats on a day
/// until no cell violates the rule against the remaining cells. A day with
/// no values at all is reported unresolved.
QcResult qc_outliers(const WideHourlyTable& table, const QcOutlierRule& rule = {});

/// Fills isolated gaps (one missing cell with both neighbours present,
/// across midnight when the dates are consecutive) by linear interpolation.
/// Longer runs are copied from `backup` where it has values; anything left
/// is reported unresolved.
QcResult qc_fill_missing(const WideHourlyTable& table, const WideHourlyTable* backup = nullptr);

}  // namespace loadshift::ingest
