#include "cli/app.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/context.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::cli {

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pandemic-era electricity load analysis: ingest, backcast, restricted VAR, search, NTL", "loadshift"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  app.add_option("--config", config_path, "key/value config file");
  app.add_option("--seed", seed, "seed for every random draw");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");

  CommandOptions o;
  using Handler = int (*)(RunContext&, const CommandOptions&);
  std::map<CLI::App*, std::pair<std::string, Handler>> handlers;
  auto sub = [&](const std::string& name, const std::string& help, Handler h) {
    auto* s = app.add_subcommand(name, help);
    handlers[s] = {name, h};
    return s;
  };

  sub("ingest", "parse sources, pivot to wide tables, run QC", cmd_ingest);
  auto* qc = sub("qc-report", "run QC on one wide table", cmd_qc_report);
  qc->add_option("--input", o.input, "wide hourly CSV");
  qc->add_option("--backup", o.backup, "backup wide hourly CSV");
  qc->add_option("--kind", o.kind, "table kind (load, price, temperature, ...)");
  auto* bc = sub("backcast", "train or load an ensemble and compute reductions", cmd_backcast);
  bc->add_option("--load-ensemble", o.load_ensemble, "use a saved ensemble instead of training");
  for (auto [name, help, h] : {std::tuple{"analyze", "search, diagnostics, IRF and FEVD", cmd_analyze},
                               std::tuple{"search", "parameter search only", cmd_search}}) {
    sub(name, help, h)->add_option("--input", o.input, "daily frame CSV");
  }
  auto* irf = sub("irf", "impulse responses of a saved model", cmd_irf);
  irf->add_option("--model", o.model, "model file");
  irf->add_option("--horizon", o.horizon, "steps")->check(CLI::PositiveNumber);
  auto* fevd = sub("fevd", "variance decomposition of a saved model", cmd_fevd);
  fevd->add_option("--model", o.model, "model file");
  fevd->add_option("--horizon", o.horizon, "steps")->check(CLI::PositiveNumber);
  fevd->add_option("--ordering", o.ordering, "comma-separated causal order");
  auto* trend = sub("trend", "trend extraction and transition period", cmd_trend);
  trend->add_option("--input", o.input, "daily frame CSV");
  trend->add_option("--column", o.column, "column to analyze");
  trend->add_option("--period", o.period, "moving-average width")->check(CLI::PositiveNumber);
  trend->add_option("--mode", o.mode, "mean or valley");
  trend->add_option("--tolerance", o.tolerance, "band as a share of the trend range");
  auto* ntl = sub("ntl", "night-time light raster processing", cmd_ntl);
  ntl->add_option("--input", o.input, "intensity grid");
  ntl->add_option("--flags", o.flags, "quality flag grid");
  ntl->add_option("--meta", o.meta, "lunar sidecar");
  ntl->add_option("--crop", o.crop, "row,col,height,width");
  ntl->add_option("--floor", o.floor, "intensity floor");
  ntl->add_option("--reference", o.reference, "before-period grid for a difference map");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  RunContext ctx;
  ctx.log = &out;
  Handler handler = nullptr;
  for (const auto& [s, h] : handlers) {
    if (s->parsed()) {
      ctx.command = h.first;
      handler = h.second;
    }
  }

  const auto started = std::chrono::steady_clock::now();
  int code = kExitError;
  try {
    if (!config_path.empty()) {
      ctx.config_path = config_path;
      ctx.config = KeyValueConfig::load(config_path);
    }
    if (!out_dir.empty()) ctx.out_dir = out_dir;
    else if (auto e = env("LOADSHIFT_OUT_DIR")) ctx.out_dir = *e;
    else ctx.out_dir = ctx.config.get_or("run", "out", "out");

    if (jobs) ctx.jobs = *jobs;
    else if (auto e = env("LOADSHIFT_JOBS")) ctx.jobs = parse_int(*e);
    else ctx.jobs = static_cast<int>(ctx.config.get_int("run", "jobs", 1));
    if (ctx.jobs < 1) throw Error(ErrorCode::kConfig, "jobs must be >= 1");

    if (seed) ctx.seed = *seed;
    else ctx.seed = static_cast<std::uint64_t>(ctx.config.get_int("run", "seed", 0));

    code = handler(ctx, o);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::kConfig) err << "run '" << args[0] << ' ' << ctx.command << " --help' for usage\n";
    code = e.code() == ErrorCode::kNoModel ? kExitNoModel : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitError;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!ctx.out_dir.empty()) {
    try {
      ctx.write_manifest(code, wall);
    } catch (const std::exception& e) {
      err << "error: cannot write manifest: " << e.what() << '\n';
      if (code == kExitOk) code = kExitError;
    }
  }
  return code;
}

}  // namespace loadshift::cli
