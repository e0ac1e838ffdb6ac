#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "loadshift/backcast/ensemble.hpp"
#include "loadshift/ingest/tables.hpp"

namespace loadshift::backcast {

/// (1 - mean(actual) / backcast) * 100. Requires backcast > 0 and 24 present
/// hourly values.
double reduction_rate(double backcast_daily, std::span<const double> actual_hourly);

struct ReductionSeries {
  std::vector<Date> dates;
  std::vector<double> backcast;
  std::vector<double> actual;  // daily mean
  std::vector<double> point;   // %
  // Reductions against the 10/25/75/90% backcast quantiles; ordered
  // q10 <= q25 <= q75 <= q90.
  std::vector<std::array<double, 4>> bounds;
};

/// Daily reductions for every date in `data` that has a complete row in
/// `actual`. Dates without a complete actual row are skipped.
ReductionSeries compute_reductions(const BackcastEnsemble& ensemble, const FeatureTable& data,
                                   const ingest::WideHourlyTable& actual);

struct MonthlySummary {
  int year = 0;
  unsigned month = 0;
  int days = 0;
  double mean = 0.0;
  double lower = 0.0;  // mean of daily q10 bounds
  double upper = 0.0;  // mean of daily q90 bounds
};

/// Needs at least `min_days` days of the month (kCoverage otherwise).
MonthlySummary monthly_summary(const ReductionSeries& series, int year, unsigned month, int min_days = 20);

std::string month_name(unsigned month);

std::string write_reduction_csv(const ReductionSeries& series);
ReductionSeries read_reduction_csv(std::string_view text);
// Rows like "Average in April,2020,10.12,7.26,12.91,[7.26, 12.91]".
std::string write_monthly_summary_csv(const std::vector<MonthlySummary>& rows);

}  // namespace loadshift::backcast
