#include <map>
#include <ostream>
#include <set>

#include "cli/commands.hpp"
#include "cli/svg.hpp"
#include "loadshift/backcast/ensemble.hpp"
#include "loadshift/backcast/reduction.hpp"
#include "loadshift/ingest/tables.hpp"
#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::cli {

namespace {

constexpr const char* kSection = "backcast";

backcast::GdpSeries load_gdp(RunContext& ctx) {
  if (auto path = ctx.config.get(kSection, "gdp")) {
    std::map<Date, double> points;
    const auto rows = parse_csv(ctx.read_input(ctx.resolve(*path)));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& f = rows[i].fields;
      if (f.size() != 2) throw Error(ErrorCode::kSchema, "gdp rows must be 'date,value'");
      points[parse_date(f[0])] = parse_double(f[1]);
    }
    if (points.empty()) throw Error(ErrorCode::kEmptyInput, "gdp file has no rows");
    return backcast::GdpSeries(std::move(points));
  }
  return backcast::GdpSeries::constant(ctx.config.get_double(kSection, "gdp_constant", 1.0));
}

bool complete_row(const ingest::WideHourlyTable& t, Eigen::Index r) { return !t.values.row(r).hasNaN(); }

// Dates in [begin, end] present in every weather table; `need_load` also
// requires a complete load row.
std::vector<Date> usable_dates(const ingest::WideHourlyTable& load,
                               const std::map<std::string, ingest::WideHourlyTable>& weather, Date begin, Date end,
                               bool need_load) {
  std::vector<Date> out;
  for (std::size_t r = 0; r < load.rows(); ++r) {
    const Date d = load.dates[r];
    if (d < begin || d > end) continue;
    if (need_load && !complete_row(load, static_cast<Eigen::Index>(r))) continue;
    bool ok = true;
    for (const auto& [_, t] : weather) ok = ok && t.find(d) >= 0;
    if (ok) out.push_back(d);
  }
  return out;
}

std::vector<std::pair<int, unsigned>> summary_months(const RunContext& ctx, const backcast::ReductionSeries& s,
                                                     bool& explicit_months) {
  std::vector<std::pair<int, unsigned>> out;
  const auto text = ctx.config.get_or(kSection, "summary_months", "");
  explicit_months = !text.empty();
  if (explicit_months) {
    for (const auto& part : split(text, ',')) {
      const auto t = std::string(trim(part));
      const Date d = parse_date(t + "-01");
      out.emplace_back(year_of(d), month_of(d));
    }
    return out;
  }
  std::set<std::pair<int, unsigned>> seen;
  for (const Date d : s.dates) seen.emplace(year_of(d), month_of(d));
  return {seen.begin(), seen.end()};
}

}  // namespace

int cmd_backcast(RunContext& ctx, const CommandOptions& opts) {
  backcast::FeatureConfig features;
  if (auto q = ctx.config.get(kSection, "quantile_levels")) features.quantile_levels = parse_double_list(*q);
  if (auto w = ctx.config.get(kSection, "weather_fields")) {
    features.weather_fields.clear();
    for (const auto& f : split(*w, ',')) features.weather_fields.emplace_back(trim(f));
  }
  features.validate();

  const auto load_path = ctx.config.get(kSection, "load");
  if (!load_path) throw Error(ErrorCode::kConfig, "[backcast] needs 'load' (wide hourly load table)");
  const auto load = ingest::read_wide_csv(ctx.read_input(ctx.resolve(*load_path)), ingest::TableKind::kLoad, "load");
  std::map<std::string, ingest::WideHourlyTable> weather;
  for (const auto& field : features.weather_fields) {
    const auto path = ctx.config.get(kSection, field);
    if (!path) throw Error(ErrorCode::kConfig, "[backcast] is missing weather table '" + field + "'");
    weather[field] = ingest::read_wide_csv(ctx.read_input(ctx.resolve(*path)), ingest::kind_for_field(field), field);
  }
  const auto gdp = load_gdp(ctx);
  if (load.rows() == 0) throw Error(ErrorCode::kEmptyInput, "load table has no rows");

  const Date eval_begin = parse_date(ctx.config.require(kSection, "eval_begin"));
  const Date eval_end = parse_date(ctx.config.get_or(kSection, "eval_end", format_date(load.dates.back())));

  backcast::BackcastEnsemble ensemble;
  const auto load_ensemble = setting(ctx, opts.load_ensemble, kSection, "load_ensemble");
  if (!load_ensemble.empty()) {
    ensemble = backcast::read_ensemble(ctx.read_input(ctx.resolve(load_ensemble)));
  } else {
    const Date train_begin = parse_date(ctx.config.get_or(kSection, "train_begin", format_date(load.dates.front())));
    const Date train_end =
        parse_date(ctx.config.get_or(kSection, "train_end", format_date(eval_begin - std::chrono::days(1))));
    const auto dates = usable_dates(load, weather, train_begin, train_end, true);
    const auto table = backcast::build_feature_table(dates, weather, gdp, features);
    Eigen::VectorXd targets(static_cast<Eigen::Index>(dates.size()));
    for (std::size_t i = 0; i < dates.size(); ++i) targets(static_cast<Eigen::Index>(i)) = load.values.row(load.find(dates[i])).mean();

    backcast::EnsembleConfig cfg;
    cfg.candidates = static_cast<int>(ctx.config.get_int(kSection, "candidates", cfg.candidates));
    cfg.keep_fraction = ctx.config.get_double(kSection, "keep_fraction", cfg.keep_fraction);
    cfg.split = ctx.config.get_double(kSection, "split", cfg.split);
    cfg.width_min = static_cast<int>(ctx.config.get_int(kSection, "width_min", cfg.width_min));
    cfg.width_max = static_cast<int>(ctx.config.get_int(kSection, "width_max", cfg.width_max));
    cfg.train.epochs = static_cast<int>(ctx.config.get_int(kSection, "epochs", cfg.train.epochs));
    cfg.train.learning_rate = ctx.config.get_double(kSection, "learning_rate", cfg.train.learning_rate);
    cfg.seed = ctx.seed;
    cfg.jobs = ctx.jobs;
    if (ctx.log) *ctx.log << "training " << cfg.candidates << " candidates on " << dates.size() << " days\n";
    ensemble = backcast::train_ensemble(table, targets, cfg, features);
    ctx.write_output("ensemble.txt", backcast::write_ensemble(ensemble));
  }

  const auto eval_dates = usable_dates(load, weather, eval_begin, eval_end, false);
  const auto eval = backcast::build_feature_table(eval_dates, weather, gdp, ensemble.features);
  const auto series = backcast::compute_reductions(ensemble, eval, load);
  ctx.write_output("reductions.csv", backcast::write_reduction_csv(series));

  const int min_days = static_cast<int>(ctx.config.get_int(kSection, "min_days", 20));
  bool explicit_months = false;
  std::vector<backcast::MonthlySummary> rows;
  for (const auto& [year, month] : summary_months(ctx, series, explicit_months)) {
    try {
      rows.push_back(backcast::monthly_summary(series, year, month, min_days));
    } catch (const Error& e) {
      if (explicit_months || e.code() != ErrorCode::kCoverage) throw;
      if (ctx.log) *ctx.log << "skipping " << backcast::month_name(month) << ' ' << year << ": " << e.what() << '\n';
    }
  }
  ctx.write_output("summary.csv", backcast::write_monthly_summary_csv(rows));

  std::vector<std::string> labels;
  Band band;
  LineSeries point{"reduction %", {}};
  for (std::size_t i = 0; i < series.dates.size(); ++i) {
    labels.push_back(format_date(series.dates[i]).substr(5));
    point.values.push_back(series.point[i]);
    band.lower.push_back(series.bounds[i][0]);
    band.upper.push_back(series.bounds[i][3]);
  }
  ctx.write_output("reduction.svg", line_chart("Daily load reduction vs backcast", labels, {point}, band));
  for (const auto& r : rows) {
    if (ctx.log) {
      *ctx.log << "Average in " << backcast::month_name(r.month) << ' ' << r.year << ": " << format_double(r.mean)
               << " [" << format_double(r.lower) << ", " << format_double(r.upper) << "]\n";
    }
  }
  return kExitOk;
}

}  // namespace loadshift::cli
