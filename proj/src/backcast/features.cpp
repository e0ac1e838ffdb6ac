#include "loadshift/backcast/features.hpp"

#include <algorithm>
#include <cmath>

#include "loadshift/util/error.hpp"

namespace loadshift::backcast {

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kParameter, "quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void FeatureConfig::validate() const {
  if (quantile_levels.empty()) throw Error(ErrorCode::kParameter, "no weather quantile levels");
  for (std::size_t i = 0; i < quantile_levels.size(); ++i) {
    const double q = quantile_levels[i];
    if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorCode::kParameter, "quantile level outside (0, 1]");
    if (i && !(q > quantile_levels[i - 1])) throw Error(ErrorCode::kParameter, "quantile levels must increase");
  }
}

Eigen::VectorXd build_features(const CalendarInfo& cal, const std::vector<WeatherDay>& weather, double gdp,
                               const FeatureConfig& config) {
  if (weather.size() != config.weather_fields.size()) {
    throw Error(ErrorCode::kFeature, "weather rows do not match the configured fields");
  }
  if (!std::isfinite(gdp)) throw Error(ErrorCode::kFeature, "gdp value is not finite");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config.dimension()));
  f(cal.month - 1) = 1.0;
  f(12 + cal.weekday) = 1.0;
  f(19) = cal.holiday ? 1.0 : 0.0;
  f(20) = static_cast<double>(cal.day) / 31.0;
  Eigen::Index k = 21;
  for (std::size_t w = 0; w < weather.size(); ++w) {
    std::vector<double> present;
    for (double v : weather[w])
      if (!std::isnan(v)) present.push_back(v);
    if (present.size() < 12) {
      throw Error(ErrorCode::kInsufficientWeather,
                  config.weather_fields[w] + " has fewer than 12 hourly values on " + format_date(cal.date));
    }
    for (double q : config.quantile_levels) f(k++) = empirical_quantile(present, q);
  }
  f(k) = gdp;
  return f;
}

double GdpSeries::at(Date date) const {
  if (points_.empty()) throw Error(ErrorCode::kFeature, "no gdp values");
  auto it = points_.upper_bound(date);
  if (it == points_.begin()) return it->second;
  return std::prev(it)->second;
}

FeatureTable build_feature_table(const std::vector<Date>& dates,
                                 const std::map<std::string, ingest::WideHourlyTable>& weather,
                                 const GdpSeries& gdp, const FeatureConfig& config) {
  config.validate();
  FeatureTable t;
  t.dates = dates;
  t.X.resize(static_cast<Eigen::Index>(dates.size()), static_cast<Eigen::Index>(config.dimension()));
  std::vector<const ingest::WideHourlyTable*> tables;
  for (const auto& field : config.weather_fields) {
    const auto it = weather.find(field);
    if (it == weather.end()) throw Error(ErrorCode::kInsufficientWeather, "no weather table for " + field);
    tables.push_back(&it->second);
  }
  std::vector<WeatherDay> rows(tables.size());
  for (std::size_t i = 0; i < dates.size(); ++i) {
    for (std::size_t w = 0; w < tables.size(); ++w) {
      const auto r = tables[w]->find(dates[i]);
      if (r < 0) {
        throw Error(ErrorCode::kInsufficientWeather,
                    "no " + config.weather_fields[w] + " data on " + format_date(dates[i]));
      }
      for (int h = 0; h < 24; ++h) rows[w][static_cast<std::size_t>(h)] = tables[w]->values(r, h);
    }
    const auto cal = make_calendar_info(dates[i], is_us_federal_holiday(dates[i]));
    t.X.row(static_cast<Eigen::Index>(i)) = build_features(cal, rows, gdp.at(dates[i]), config).transpose();
  }
  return t;
}

}  // namespace loadshift::backcast
