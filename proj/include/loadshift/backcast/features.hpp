#pragma once

#include <Eigen/Dense>

#include <array>
#include <map>
#include <string>
#include <vector>

#include "loadshift/core/calendar.hpp"
#include "loadshift/ingest/tables.hpp"

namespace loadshift::backcast {

/// Type-7 empirical quantile (linear interpolation between order
/// statistics). `values` must be non-empty and q in [0, 1].
double empirical_quantile(std::vector<double> values, double q);

struct FeatureConfig {
  // Median for 0.5, maximum for 1.0.
  std::vector<double> quantile_levels{0.25, 0.5, 0.75, 1.0};
  std::vector<std::string> weather_fields{"temperature", "humidity", "wind_speed"};

  // 12 month + 7 weekday + holiday + day-of-month + quantiles + gdp.
  std::size_t dimension() const { return 21 + weather_fields.size() * quantile_levels.size() + 1; }
  // Throws kParameter unless levels are sorted, unique and in (0, 1].
  void validate() const;
};

using WeatherDay = std::array<double, 24>;

/// Feature layout: one-hot month, one-hot weekday (Monday first), holiday
/// bit, day-of-month / 31, then per weather field its quantiles, then gdp.
/// `weather` follows config.weather_fields. Each day needs >= 12 present
/// hourly values (kInsufficientWeather otherwise).
Eigen::VectorXd build_features(const CalendarInfo& calendar, const std::vector<WeatherDay>& weather, double gdp,
                               const FeatureConfig& config = {});

// Step function over dated observations: value of the latest point on or
// before the date, the first value before the first point.
class GdpSeries {
 public:
  GdpSeries() = default;
  explicit GdpSeries(std::map<Date, double> points) : points_(std::move(points)) {}
  static GdpSeries constant(double value) { return GdpSeries({{Date{}, value}}); }
  double at(Date date) const;
  bool empty() const { return points_.empty(); }

 private:
  std::map<Date, double> points_;
};

struct FeatureTable {
  std::vector<Date> dates;
  Eigen::MatrixXd X;  // one row per date
};

/// Features for every requested date. `weather` maps field name to its wide
/// hourly table; a date missing from any table is a kInsufficientWeather
/// error.
FeatureTable build_feature_table(const std::vector<Date>& dates,
                                 const std::map<std::string, ingest::WideHourlyTable>& weather,
                                 const GdpSeries& gdp, const FeatureConfig& config = {});

}  // namespace loadshift::backcast
