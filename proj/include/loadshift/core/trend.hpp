#pragma once

#include <Eigen/Dense>

#include <string_view>

#include "loadshift/core/frame.hpp"

namespace loadshift {

struct TransitionPeriod {
  Date begin;
  Date end;
};

enum class TransitionMode {
  kClosestToMean,
  // begin = first day after the first trough whose trend drops below it
  // (used for series with an early rebound, e.g. on-site workers).
  kBelowPreviousValley,
};

struct TrendTransition {
  Eigen::VectorXd trend;
  TransitionPeriod transition;
  std::size_t begin_index = 0;
  std::size_t end_index = 0;
  bool degenerate = false;  // constant trend; begin = end = first date
};

/// Additive-model trend: centered moving average of width `period` (the
/// 2 x period half-weighted filter for even widths), ends padded with the
/// nearest computed value.
template <typename Derived>
Eigen::VectorXd seasonal_trend(const Eigen::MatrixBase<Derived>& series, int period) {
  const Eigen::Index n = series.size();
  Eigen::VectorXd trend(n);
  const Eigen::Index half = period / 2;
  const bool even = period % 2 == 0;
  for (Eigen::Index t = half; t < n - half; ++t) {
    double sum = 0.0;
    if (even) {
      sum = 0.5 * series(t - half) + 0.5 * series(t + half);
      for (Eigen::Index k = t - half + 1; k < t + half; ++k) sum += series(k);
    } else {
      for (Eigen::Index k = t - half; k <= t + half; ++k) sum += series(k);
    }
    trend(t) = sum / period;
  }
  for (Eigen::Index t = 0; t < half && t < n; ++t) trend(t) = trend(half);
  for (Eigen::Index t = std::max<Eigen::Index>(n - half, half); t < n; ++t) trend(t) = trend(n - half - 1);
  return trend;
}

/// Locates the single transition between two steady stages of a column.
///
/// begin: latest day whose trend is within `tolerance` x (trend range) of
/// the mean of all earlier trend values. end: earliest day at or after
/// begin whose trend is within the same band of the mean of all later
/// values.
TrendTransition trend_transition(const TimeSeriesFrame& frame, std::string_view column, int period = 7,
                                 TransitionMode mode = TransitionMode::kClosestToMean, double tolerance = 0.02);

}  // namespace loadshift
