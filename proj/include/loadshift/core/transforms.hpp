#pragma once

#include <string>
#include <vector>

#include "loadshift/core/frame.hpp"

namespace loadshift {

// Natural log of the named columns. With drop_nonpositive, any row where a
// named column is <= 0 is removed; otherwise such cells become missing.
TimeSeriesFrame log_transform(const TimeSeriesFrame& frame, const std::vector<std::string>& columns,
                              bool drop_nonpositive);

// Applies first differencing `order` times; output starts at dates[order].
TimeSeriesFrame difference(const TimeSeriesFrame& frame, int order);

// Inverse of difference(): `head` holds the first `order` rows of the
// original levels.
TimeSeriesFrame undifference(const TimeSeriesFrame& differenced, const TimeSeriesFrame& head);

// Trailing 7-day mean; the first six rows average the available prefix.
TimeSeriesFrame weekly_moving_average(const TimeSeriesFrame& frame, const std::vector<std::string>& columns);

struct DayOfWeekAlignment {
  std::vector<Date> current_dates;
  std::vector<Date> reference_dates;
  Eigen::MatrixXd current;    // rows follow current_dates
  Eigen::MatrixXd reference;  // rows follow reference_dates
  std::vector<std::string> names;
  std::vector<Date> unpaired;  // current dates without a counterpart
};

// Pairs each current date with the reference date carrying the same ISO
// week number and weekday, preferring the ISO year one before the current
// date's. Current dates with no such reference row are reported in
// `unpaired`.
DayOfWeekAlignment align_day_of_week(const TimeSeriesFrame& current, const TimeSeriesFrame& reference);

}  // namespace loadshift
