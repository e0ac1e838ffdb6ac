#include "loadshift/core/trend.hpp"

#include <optional>

#include "loadshift/util/error.hpp"

namespace loadshift {

namespace {

std::size_t closest_to_prior_mean(const Eigen::VectorXd& trend, double band) {
  std::size_t begin = 0;
  double running = trend(0);
  for (Eigen::Index t = 1; t < trend.size(); ++t) {
    const double prior_mean = running / static_cast<double>(t);
    if (std::abs(trend(t) - prior_mean) <= band) begin = static_cast<std::size_t>(t);
    running += trend(t);
  }
  return begin;
}

std::size_t closest_to_later_mean(const Eigen::VectorXd& trend, double band, std::size_t from) {
  const auto n = static_cast<std::size_t>(trend.size());
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t t = n; t-- > 0;) suffix[t] = suffix[t + 1] + trend(static_cast<Eigen::Index>(t));
  for (std::size_t t = from; t + 1 < n; ++t) {
    const double later_mean = suffix[t + 1] / static_cast<double>(n - t - 1);
    if (std::abs(trend(static_cast<Eigen::Index>(t)) - later_mean) <= band) return t;
  }
  return n - 1;
}

std::optional<std::size_t> below_previous_valley(const Eigen::VectorXd& trend) {
  const Eigen::Index n = trend.size();
  for (Eigen::Index m = 1; m + 1 < n; ++m) {
    if (trend(m) < trend(m - 1) && trend(m) <= trend(m + 1)) {
      for (Eigen::Index t = m + 1; t < n; ++t) {
        if (trend(t) < trend(m)) return static_cast<std::size_t>(t);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

TrendTransition trend_transition(const TimeSeriesFrame& frame, std::string_view column, int period,
                                 TransitionMode mode, double tolerance) {
  if (period < 1) throw Error(ErrorCode::kParameter, "trend period must be positive");
  const Eigen::VectorXd series = frame.column(column);
  if (series.size() < 2 * period) {
    throw Error(ErrorCode::kInsufficientData, "trend transition needs at least 2 x period rows");
  }
  if (series.hasNaN()) throw Error(ErrorCode::kPrecondition, "trend transition: missing values");

  TrendTransition out;
  out.trend = seasonal_trend(series, period);
  const double range = out.trend.maxCoeff() - out.trend.minCoeff();
  const double scale = std::max(1.0, out.trend.cwiseAbs().maxCoeff());
  if (range <= 1e-12 * scale) {
    out.degenerate = true;
    out.transition = {frame.dates().front(), frame.dates().front()};
    return out;
  }

  const double band = tolerance * range;
  std::size_t begin = closest_to_prior_mean(out.trend, band);
  if (mode == TransitionMode::kBelowPreviousValley) {
    if (auto v = below_previous_valley(out.trend)) begin = *v;
  }
  const std::size_t end = closest_to_later_mean(out.trend, band, begin);
  out.begin_index = begin;
  out.end_index = end;
  out.transition = {frame.dates()[begin], frame.dates()[end]};
  return out;
}

}  // namespace loadshift
