#include <ostream>
#include <sstream>

#include "cli/commands.hpp"
#include "loadshift/ingest/geo.hpp"
#include "loadshift/ingest/mobility.hpp"
#include "loadshift/ingest/parse.hpp"
#include "loadshift/ingest/qc.hpp"
#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::cli {

std::string setting(const RunContext& ctx, const std::string& flag, const std::string& section, const std::string& key,
                    const std::string& fallback) {
  if (!flag.empty()) return flag;
  return ctx.config.get_or(section, key, fallback);
}

namespace {

struct Cleaned {
  ingest::WideHourlyTable table;
  ingest::QcReport report;
};

Cleaned run_qc(ingest::WideHourlyTable table, ingest::QcReport report, const ingest::WideHourlyTable* backup,
               bool outliers) {
  if (outliers && ingest::outlier_rule_applies(table.kind)) {
    auto q = ingest::qc_outliers(table);
    table = std::move(q.table);
    report.merge(q.report);
  }
  auto f = ingest::qc_fill_missing(table, backup);
  report.merge(f.report);
  return {std::move(f.table), std::move(report)};
}

std::string rejects_csv(const std::vector<ingest::ParseReject>& rejects) {
  std::ostringstream os;
  os << "line,reason\n";
  for (const auto& r : rejects) os << r.line << ',' << csv_escape(r.reason) << '\n';
  return os.str();
}

void ingest_geo(RunContext& ctx) {
  const auto map = ingest::RegionMap::from_csv(ctx.read_input(ctx.resolve(ctx.config.require("geo", "region_map"))));
  const auto column = ctx.config.get_or("geo", "column", "value");
  const auto counties =
      ingest::read_county_series_csv(ctx.read_input(ctx.resolve(ctx.config.require("geo", "county_series"))), column);
  const auto agg = ingest::aggregate_geo(counties, map);
  for (const auto& [region, frame] : agg.regions) ctx.write_output("regions/" + region + ".csv", write_frame_csv(frame));
  std::string warnings = "warning\n";
  for (const auto& w : agg.warnings) warnings += csv_escape(w) + "\n";
  ctx.write_output("regions/warnings.csv", warnings);
}

void ingest_mobility(RunContext& ctx) {
  const auto counts =
      ingest::read_device_counts_csv(ctx.read_input(ctx.resolve(ctx.config.require("mobility", "device_counts"))));
  auto result = ingest::mobility_metrics(counts);
  std::map<std::pair<std::string, Date>, double> retail;
  if (auto poi = ctx.config.get("mobility", "poi")) {
    const auto rows = ingest::read_poi_csv(ctx.read_input(ctx.resolve(*poi)));
    for (const auto& [county, frame] : ingest::retail_visits(rows)) {
      for (std::size_t i = 0; i < frame.rows(); ++i) retail[{county, frame.dates()[i]}] = frame.values()(i, 0);
    }
  }
  std::ostringstream os;
  os << "date,county,stay_home_rate,home_dwell_rate,parttime_rate,fulltime_rate,retail_visits\n";
  for (auto& m : result.rows) {
    const auto it = retail.find({m.county, m.date});
    if (it != retail.end()) m.retail_visits = it->second;
    os << format_date(m.date) << ',' << csv_escape(m.county) << ',' << format_double(m.stay_home_rate) << ','
       << format_double(m.home_dwell_rate) << ',' << format_double(m.parttime_rate) << ','
       << format_double(m.fulltime_rate) << ',' << format_double(m.retail_visits) << '\n';
  }
  ctx.write_output("mobility.csv", os.str());
  std::ostringstream errs;
  errs << "index,message\n";
  for (const auto& e : result.errors) errs << e.index << ',' << csv_escape(e.message) << '\n';
  ctx.write_output("mobility_errors.csv", errs.str());
}

}  // namespace

int cmd_ingest(RunContext& ctx, const CommandOptions&) {
  std::size_t sources = 0, unresolved = 0;
  for (const auto& section : ctx.config.sections()) {
    if (section.rfind("source.", 0) != 0) continue;
    ++sources;
    const auto name = section.substr(7);
    const auto desc = ingest::SourceDescriptor::from_config(ctx.config, section);
    const auto parsed = ingest::parse_source(ctx.read_input(ctx.resolve(ctx.config.require(section, "path"))), desc);

    ingest::WideHourlyTable table;
    ingest::QcReport report;
    if (ctx.config.get_bool(section, "resample", false)) {
      table = ingest::resample_weather_hourly(parsed.table);
    } else {
      auto pivot = ingest::pivot_wide(parsed.table);
      table = std::move(pivot.table);
      report = std::move(pivot.report);
    }
    table.kind = desc.kind;
    std::optional<ingest::WideHourlyTable> backup;
    if (auto b = ctx.config.get(section, "backup")) {
      backup = ingest::read_wide_csv(ctx.read_input(ctx.resolve(*b)), desc.kind, desc.field);
    }
    auto cleaned = run_qc(std::move(table), std::move(report), backup ? &*backup : nullptr,
                          ctx.config.get_bool(section, "outliers", true));
    ctx.write_output(name + ".csv", ingest::write_wide_csv(cleaned.table));
    ctx.write_output(name + ".qc.csv", ingest::write_qc_report(cleaned.report));
    if (!parsed.rejects.empty()) ctx.write_output(name + ".rejects.csv", rejects_csv(parsed.rejects));
    unresolved += cleaned.report.unresolved.size();
    if (ctx.log) {
      *ctx.log << name << ": " << cleaned.table.rows() << " days, " << cleaned.report.outliers.size() << " outliers, "
               << cleaned.report.gaps_filled.size() << " gaps filled, " << cleaned.report.unresolved.size()
               << " unresolved\n";
    }
  }
  if (ctx.config.has_section("geo")) {
    ingest_geo(ctx);
    ++sources;
  }
  if (ctx.config.has_section("mobility")) {
    ingest_mobility(ctx);
    ++sources;
  }
  if (sources == 0) {
    throw Error(ErrorCode::kConfig, "ingest config names no [source.<name>], [geo] or [mobility] sections");
  }
  return unresolved > 0 ? kExitUnresolved : kExitOk;
}

int cmd_qc_report(RunContext& ctx, const CommandOptions& opts) {
  const auto input = setting(ctx, opts.input, "qc", "input");
  if (input.empty()) throw Error(ErrorCode::kConfig, "qc-report needs --input or [qc] input");
  const auto kind_text = setting(ctx, opts.kind, "qc", "kind", "load");
  const auto kind = ingest::parse_table_kind(kind_text);
  auto table = ingest::read_wide_csv(ctx.read_input(ctx.resolve(input)), kind, kind_text);
  std::optional<ingest::WideHourlyTable> backup;
  const auto backup_path = setting(ctx, opts.backup, "qc", "backup");
  if (!backup_path.empty()) backup = ingest::read_wide_csv(ctx.read_input(ctx.resolve(backup_path)), kind, kind_text);
  auto cleaned = run_qc(std::move(table), {}, backup ? &*backup : nullptr, true);
  ctx.write_output("cleaned.csv", ingest::write_wide_csv(cleaned.table));
  ctx.write_output("qc_report.csv", ingest::write_qc_report(cleaned.report));
  if (ctx.log) {
    *ctx.log << cleaned.report.outliers.size() << " outliers, " << cleaned.report.gaps_filled.size()
             << " gaps filled, " << cleaned.report.unresolved.size() << " unresolved\n";
  }
  return cleaned.report.unresolved.empty() ? kExitOk : kExitUnresolved;
}

}  // namespace loadshift::cli
