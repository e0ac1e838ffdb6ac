#pragma once

// Seeded synthetic fixtures shared by unit, acceptance and CLI tests.

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "loadshift/core/calendar.hpp"
#include "loadshift/ingest/tables.hpp"

namespace loadshift::synthetic {

struct LoadFixture {
  std::map<std::string, ingest::WideHourlyTable> weather;
  ingest::WideHourlyTable load;          // what was "measured"
  ingest::WideHourlyTable counterfactual;  // load without the injected drop
};

inline ingest::WideHourlyTable empty_table(ingest::TableKind kind, std::string field, std::size_t days) {
  ingest::WideHourlyTable t;
  t.kind = kind;
  t.field = std::move(field);
  t.location = "SYN";
  t.values.resize(static_cast<Eigen::Index>(days), 24);
  return t;
}

// Known daily-mean load: temperature-driven U shape, humidity term, weekend
// and holiday dips.
inline double daily_load(double temp_mean, double humidity_mean, unsigned weekday, bool holiday) {
  double v = 1000.0 + 2.2 * (temp_mean - 17.0) * (temp_mean - 17.0) + 1.5 * (humidity_mean - 60.0);
  if (weekday >= 5) v *= 0.88;
  if (holiday) v *= 0.9;
  return v;
}

/// Hourly weather and load for [begin, end]. Loads on days in
/// [drop_begin, drop_end] are scaled by (1 - drop).
inline LoadFixture make_load_fixture(Date begin, Date end, std::uint64_t seed, double drop = 0.0,
                                     Date drop_begin = {}, Date drop_end = {}, double noise = 0.01) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  const auto days = static_cast<std::size_t>((end - begin).count() + 1);
  LoadFixture f;
  auto temp = empty_table(ingest::TableKind::kTemperature, "temperature", days);
  auto hum = empty_table(ingest::TableKind::kHumidity, "humidity", days);
  auto wind = empty_table(ingest::TableKind::kWindSpeed, "wind_speed", days);
  f.load = empty_table(ingest::TableKind::kLoad, "load", days);
  f.counterfactual = f.load;
  double temp_anomaly = 0.0;
  for (std::size_t i = 0; i < days; ++i) {
    const Date d = begin + std::chrono::days{static_cast<int>(i)};
    for (auto* t : {&temp, &hum, &wind, &f.load, &f.counterfactual}) t->dates.push_back(d);
    const double doy = static_cast<double>((d - make_date(year_of(d), 1, 1)).count());
    temp_anomaly = 0.7 * temp_anomaly + 2.0 * z(rng);
    const double seasonal = 14.0 - 11.0 * std::cos(2 * std::numbers::pi * (doy - 15.0) / 365.0) + temp_anomaly;
    const double hum_day = 60.0 + 10.0 * std::sin(2 * std::numbers::pi * doy / 365.0) + 5.0 * z(rng);
    const double wind_day = 4.0 + std::abs(1.5 * z(rng));
    double tsum = 0, hsum = 0;
    for (int h = 0; h < 24; ++h) {
      const double diurnal = std::sin(2 * std::numbers::pi * (h - 9) / 24.0);
      temp.values(static_cast<Eigen::Index>(i), h) = seasonal + 5.0 * diurnal + 0.3 * z(rng);
      hum.values(static_cast<Eigen::Index>(i), h) = hum_day - 8.0 * diurnal + 0.5 * z(rng);
      wind.values(static_cast<Eigen::Index>(i), h) = wind_day + 0.8 * diurnal + 0.2 * std::abs(z(rng));
      tsum += temp.values(static_cast<Eigen::Index>(i), h);
      hsum += hum.values(static_cast<Eigen::Index>(i), h);
    }
    const double base = daily_load(tsum / 24, hsum / 24, weekday_index(d), is_us_federal_holiday(d)) *
                        (1.0 + noise * z(rng));
    const bool dropped = drop != 0.0 && d >= drop_begin && d <= drop_end;
    for (int h = 0; h < 24; ++h) {
      const double shape = 1.0 + 0.2 * std::sin(2 * std::numbers::pi * (h - 7) / 24.0);
      f.counterfactual.values(static_cast<Eigen::Index>(i), h) = base * shape;
      f.load.values(static_cast<Eigen::Index>(i), h) = base * shape * (dropped ? 1.0 - drop : 1.0);
    }
  }
  f.weather.emplace("temperature", std::move(temp));
  f.weather.emplace("humidity", std::move(hum));
  f.weather.emplace("wind_speed", std::move(wind));
  return f;
}

}  // namespace loadshift::synthetic
