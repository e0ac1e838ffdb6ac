#include "loadshift/backcast/reduction.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::backcast {

namespace {

double reduction_from_mean(double backcast, double actual_mean) { return (1.0 - actual_mean / backcast) * 100.0; }

}  // namespace

double reduction_rate(double backcast_daily, std::span<const double> actual_hourly) {
  if (!(backcast_daily > 0.0)) throw Error(ErrorCode::kDomain, "backcast must be positive");
  if (actual_hourly.size() != 24) throw Error(ErrorCode::kPrecondition, "need 24 hourly values");
  double sum = 0.0;
  for (double v : actual_hourly) {
    if (std::isnan(v)) throw Error(ErrorCode::kPrecondition, "missing hourly value; run QC first");
    sum += v;
  }
  return reduction_from_mean(backcast_daily, sum / 24.0);
}

ReductionSeries compute_reductions(const BackcastEnsemble& ensemble, const FeatureTable& data,
                                   const ingest::WideHourlyTable& actual) {
  const auto preds = predict(ensemble, data.X);
  ReductionSeries s;
  for (std::size_t i = 0; i < data.dates.size(); ++i) {
    const auto r = actual.find(data.dates[i]);
    if (r < 0 || actual.values.row(r).array().isNaN().any()) continue;
    const auto& p = preds[i];
    const Eigen::RowVectorXd row = actual.values.row(r);
    s.dates.push_back(data.dates[i]);
    s.backcast.push_back(p.point);
    s.actual.push_back(row.mean());
    s.point.push_back(reduction_rate(p.point, std::span<const double>(row.data(), 24)));
    std::array<double, 4> b{};
    for (std::size_t k = 0; k < 4; ++k) {
      if (!(p.quantiles[k] > 0.0)) throw Error(ErrorCode::kDomain, "backcast quantile must be positive");
      b[k] = reduction_from_mean(p.quantiles[k], row.mean());
    }
    s.bounds.push_back(b);
  }
  return s;
}

MonthlySummary monthly_summary(const ReductionSeries& series, int year, unsigned month, int min_days) {
  MonthlySummary m{year, month, 0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < series.dates.size(); ++i) {
    if (year_of(series.dates[i]) != year || month_of(series.dates[i]) != month) continue;
    ++m.days;
    m.mean += series.point[i];
    m.lower += series.bounds[i][0];
    m.upper += series.bounds[i][3];
  }
  if (m.days == 0 || m.days < min_days) {
    throw Error(ErrorCode::kCoverage, "only " + std::to_string(m.days) + " days in " + month_name(month) + " " +
                                          std::to_string(year));
  }
  m.mean /= m.days;
  m.lower /= m.days;
  m.upper /= m.days;
  return m;
}

std::string month_name(unsigned month) {
  static const char* kNames[] = {"January", "February", "March",     "April",   "May",      "June",
                                 "July",    "August",   "September", "October", "November", "December"};
  if (month < 1 || month > 12) throw Error(ErrorCode::kParameter, "month out of range");
  return kNames[month - 1];
}

std::string write_reduction_csv(const ReductionSeries& s) {
  std::ostringstream os;
  os << "date,backcast,actual,reduction,q10,q25,q75,q90\n";
  for (std::size_t i = 0; i < s.dates.size(); ++i) {
    os << format_date(s.dates[i]) << ',' << format_double(s.backcast[i]) << ',' << format_double(s.actual[i]) << ','
       << format_double(s.point[i]);
    for (double b : s.bounds[i]) os << ',' << format_double(b);
    os << '\n';
  }
  return os.str();
}

ReductionSeries read_reduction_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || join(rows[0].fields, ",") != "date,backcast,actual,reduction,q10,q25,q75,q90") {
    throw Error(ErrorCode::kSchema, "not a reduction table");
  }
  ReductionSeries s;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != 8) throw Error(ErrorCode::kSchema, "reduction table line " + std::to_string(rows[i].line));
    s.dates.push_back(parse_date(f[0]));
    s.backcast.push_back(parse_double(f[1]));
    s.actual.push_back(parse_double(f[2]));
    s.point.push_back(parse_double(f[3]));
    s.bounds.push_back({parse_double(f[4]), parse_double(f[5]), parse_double(f[6]), parse_double(f[7])});
  }
  return s;
}

std::string write_monthly_summary_csv(const std::vector<MonthlySummary>& rows) {
  std::ostringstream os;
  os << "period,year,mean,lower,upper,interval,days\n";
  char buf[96];
  for (const auto& m : rows) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f,%.2f,\"[%.2f, %.2f]\"", m.mean, m.lower, m.upper, m.lower, m.upper);
    os << "Average in " << month_name(m.month) << ',' << m.year << ',' << buf << ',' << m.days << '\n';
  }
  return os.str();
}

}  // namespace loadshift::backcast
