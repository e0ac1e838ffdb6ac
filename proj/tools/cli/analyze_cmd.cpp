#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/svg.hpp"
#include "loadshift/core/transforms.hpp"
#include "loadshift/rvar/diagnostics.hpp"
#include "loadshift/rvar/dynamics.hpp"
#include "loadshift/search/search.hpp"
#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::cli {

namespace {

TimeSeriesFrame load_store(RunContext& ctx, const CommandOptions& opts) {
  const auto input = setting(ctx, opts.input, "analyze", "input");
  if (input.empty()) throw Error(ErrorCode::kConfig, "needs --input or [analyze] input (daily frame CSV)");
  auto frame = read_frame_csv(ctx.read_input(ctx.resolve(input)));
  if (auto smooth = ctx.config.get("analyze", "smooth")) {
    std::vector<std::string> cols;
    for (const auto& c : split(*smooth, ',')) cols.emplace_back(trim(c));
    frame = weekly_moving_average(frame, cols);
  }
  return frame;
}

std::string failures_csv(const search::SearchResult& r) {
  std::map<std::string, int> counts;
  for (const auto& c : r.candidates) ++counts[c.failed_gate.empty() ? "ranked_below_inadmissible" : c.failed_gate];
  std::ostringstream os;
  os << "failed_gate,combinations\n";
  for (const auto& [gate, n] : counts) os << gate << ',' << n << '\n';
  return os.str();
}

std::string summary_json(const search::SearchResult& r) {
  const auto& w = r.winner();
  nlohmann::ordered_json j;
  j["index"] = w.params.index;
  j["variables"] = w.params.variables;
  j["begin"] = format_date(w.params.range.begin);
  j["end"] = format_date(w.params.range.end);
  j["order"] = w.params.order;
  j["rule"] = w.params.rule;
  j["aic"] = w.aic;
  j["bic"] = w.bic;
  j["explainable_rate"] = w.explainable;
  j["irf_signs"] = w.irf_signs;
  j["masked_coefficients"] = w.masked;
  j["combinations"] = r.candidates.size();
  return j.dump(2) + "\n";
}

std::vector<std::string> step_labels(int first, int last) {
  std::vector<std::string> out;
  for (int h = first; h <= last; ++h) out.push_back(std::to_string(h));
  return out;
}

void write_irf_outputs(RunContext& ctx, const rvar::RVarModel& m, int horizon) {
  std::vector<rvar::IrfResult> irfs;
  for (int j = 0; j < m.n(); ++j) irfs.push_back(rvar::irf(m, j, horizon));
  ctx.write_output("irf.csv", rvar::write_irf_csv(m, irfs));
  std::vector<LineSeries> lines;
  for (int j = 0; j < m.n(); ++j) {
    LineSeries s{m.names[static_cast<std::size_t>(j)] + " shock", {}};
    for (int t = 0; t <= horizon; ++t) s.values.push_back(irfs[static_cast<std::size_t>(j)].responses(t, 0));
    lines.push_back(std::move(s));
  }
  ctx.write_output("irf.svg", line_chart("Response of " + m.names[0] + " to unit shocks", step_labels(0, horizon), lines));
  if (rvar::stability_test(m, true).stable) {
    std::ostringstream os;
    os << "shock,response,long_run\n";
    for (int j = 0; j < m.n(); ++j) {
      const auto cum = rvar::irf_cumulative(m, irfs[static_cast<std::size_t>(j)]);
      for (int i = 0; i < m.n(); ++i) {
        os << m.names[static_cast<std::size_t>(j)] << ',' << m.names[static_cast<std::size_t>(i)] << ','
           << format_double(cum.long_run(i)) << '\n';
      }
    }
    ctx.write_output("irf_long_run.csv", os.str());
  }
}

void write_fevd_outputs(RunContext& ctx, const rvar::RVarModel& m, int horizon, const std::vector<int>& ordering) {
  const auto f = rvar::fevd(m, horizon, ordering);
  ctx.write_output("fevd.csv", rvar::write_fevd_csv(m, f));
  Eigen::MatrixXd shares(horizon, m.n());
  std::ostringstream er;
  er << "horizon,explainable_rate\n";
  for (int h = 1; h <= horizon; ++h) {
    shares.row(h - 1) = f.w[static_cast<std::size_t>(h - 1)].row(0);
    er << h << ',' << format_double(search::explainable_rate(f, 0, h)) << '\n';
  }
  ctx.write_output("explainable_rate.csv", er.str());
  ctx.write_output("fevd.svg", stacked_bar_chart("Variance decomposition of " + m.names[0], step_labels(1, horizon),
                                                 m.names, shares));
}

// Runs the sweep; on no admissible model writes the log and failure table.
std::optional<search::SearchResult> sweep(RunContext& ctx, const TimeSeriesFrame& store, search::SearchConfig& cfg) {
  cfg.scoring.jobs = ctx.jobs;
  if (ctx.log) *ctx.log << "evaluating " << cfg.space.size() << " combinations\n";
  try {
    auto r = search::run_search(store, cfg.space, cfg.scoring);
    ctx.write_output("search_log.csv", search::write_search_log_csv(r));
    return r;
  } catch (const search::NoModelError& e) {
    ctx.write_output("search_log.csv", search::write_search_log_csv(e.partial()));
    ctx.write_output("failures.csv", failures_csv(e.partial()));
    if (ctx.log) *ctx.log << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int cmd_search(RunContext& ctx, const CommandOptions& opts) {
  const auto store = load_store(ctx, opts);
  auto cfg = search::parse_search_config(ctx.config);
  const auto r = sweep(ctx, store, cfg);
  if (!r) return kExitNoModel;
  ctx.write_output("robustness.csv", search::write_robustness_csv(*r));
  ctx.write_output("model.txt", rvar::write_model(*r->winner().model));
  ctx.write_output("summary.json", summary_json(*r));
  return kExitOk;
}

int cmd_analyze(RunContext& ctx, const CommandOptions& opts) {
  const auto store = load_store(ctx, opts);
  auto cfg = search::parse_search_config(ctx.config);
  const auto r = sweep(ctx, store, cfg);
  if (!r) return kExitNoModel;
  const auto& w = r->winner();
  ctx.write_output("robustness.csv", search::write_robustness_csv(*r));
  ctx.write_output("model.txt", rvar::write_model(*w.model));
  ctx.write_output("diagnostics.csv", rvar::write_diagnostics_csv(*w.diagnostics));
  ctx.write_output("summary.json", summary_json(*r));
  write_irf_outputs(ctx, *w.model, cfg.scoring.irf_horizon);
  write_fevd_outputs(ctx, *w.model, cfg.scoring.fevd_horizon, {});
  if (ctx.log) {
    *ctx.log << "chosen: order " << w.params.order << ", rule " << w.params.rule << ", "
             << join(w.params.variables, ",") << ", explainable rate " << format_double(w.explainable) << "%\n";
  }
  return kExitOk;
}

namespace {

rvar::RVarModel load_model(RunContext& ctx, const CommandOptions& opts, const std::string& section) {
  const auto path = setting(ctx, opts.model, section, "model");
  if (path.empty()) throw Error(ErrorCode::kConfig, "needs --model or [" + section + "] model");
  return rvar::read_model(ctx.read_input(ctx.resolve(path)));
}

int horizon_for(const RunContext& ctx, const CommandOptions& opts, const std::string& section) {
  const int h = opts.horizon > 0 ? opts.horizon : static_cast<int>(ctx.config.get_int(section, "horizon", 10));
  if (h < 1) throw Error(ErrorCode::kParameter, "horizon must be >= 1");
  return h;
}

}  // namespace

int cmd_irf(RunContext& ctx, const CommandOptions& opts) {
  const auto m = load_model(ctx, opts, "irf");
  write_irf_outputs(ctx, m, horizon_for(ctx, opts, "irf"));
  return kExitOk;
}

int cmd_fevd(RunContext& ctx, const CommandOptions& opts) {
  const auto m = load_model(ctx, opts, "fevd");
  std::vector<int> ordering;
  const auto text = setting(ctx, opts.ordering, "fevd", "ordering");
  for (const auto& part : split(text, ',')) {
    const auto name = std::string(trim(part));
    if (name.empty()) continue;
    const auto it = std::find(m.names.begin(), m.names.end(), name);
    if (it == m.names.end()) throw Error(ErrorCode::kNamedColumn, "ordering names unknown variable '" + name + "'");
    ordering.push_back(static_cast<int>(it - m.names.begin()));
  }
  write_fevd_outputs(ctx, m, horizon_for(ctx, opts, "fevd"), ordering);
  return kExitOk;
}

}  // namespace loadshift::cli
