#include "loadshift/search/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "loadshift/core/transforms.hpp"
#include "loadshift/rvar/stattests.hpp"
#include "loadshift/util/csv.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::search {

rvar::RestrictionMask build_restriction_mask(const TimeSeriesFrame& frame, int p, int rule) {
  if (rule < 1 || rule > 3) throw Error(ErrorCode::kParameter, "restriction rule must be 1, 2 or 3");
  if (p < 1 || p > rvar::kMaxOrder) throw Error(ErrorCode::kParameter, "order must be in 1..7");
  const int n = static_cast<int>(frame.cols());
  rvar::RestrictionMask mask(p, n);
  for (int i = 1; i < n; ++i) mask.set_all_lags(i, 0);
  if (rule == 1) return mask;
  const double threshold = rule == 2 ? 0.1 : 0.05;
  const auto& names = frame.names();
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rvar::granger_wald(frame, names[j], names[i], p) > threshold) mask.set_all_lags(i, j);
    }
  }
  return mask;
}

double explainable_rate(const rvar::FevdResult& fevd, int target, int horizon) {
  if (horizon == 0) horizon = fevd.horizon;
  if (horizon < 1 || horizon > fevd.horizon || horizon > static_cast<int>(fevd.w.size())) {
    throw Error(ErrorCode::kParameter, "explainable rate horizon out of range");
  }
  const auto& w = fevd.w[static_cast<std::size_t>(horizon - 1)];
  if (target < 0 || target >= w.rows()) throw Error(ErrorCode::kParameter, "target index out of range");
  return std::clamp(100.0 * (1.0 - w(target, target)), 0.0, 100.0);
}

void SearchSpace::validate() const {
  if (variable_subsets.empty() || date_ranges.empty() || orders.empty() || rules.empty()) {
    throw Error(ErrorCode::kParameter, "search space has an empty axis");
  }
  const auto& target = variable_subsets.front().empty() ? std::string() : variable_subsets.front().front();
  for (const auto& s : variable_subsets) {
    if (s.empty() || s.front() != target) {
      throw Error(ErrorCode::kParameter, "every subset must list the target '" + target + "' first");
    }
    if (std::set<std::string>(s.begin(), s.end()).size() != s.size()) {
      throw Error(ErrorCode::kParameter, "subset repeats a variable: " + join(s, ","));
    }
  }
  for (int p : orders) {
    if (p < 1 || p > rvar::kMaxOrder) throw Error(ErrorCode::kParameter, "order outside 1..7: " + std::to_string(p));
  }
  for (int r : rules) {
    if (r < 1 || r > 3) throw Error(ErrorCode::kParameter, "rule outside 1..3: " + std::to_string(r));
  }
  for (const auto& d : date_ranges) {
    if (d.end < d.begin) throw Error(ErrorCode::kParameter, "date range ends before it begins");
  }
}

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    const auto t = trim(part);
    if (t.empty()) continue;
    const auto dash = t.find('-', 1);
    if (dash != std::string_view::npos) {
      const int a = parse_int(t.substr(0, dash));
      const int b = parse_int(t.substr(dash + 1));
      for (int v = a; v <= b; ++v) out.push_back(v);
    } else {
      out.push_back(parse_int(t));
    }
  }
  return out;
}

std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& part : split(text, ',')) {
    auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

SearchConfig parse_search_config(const KeyValueConfig& config) {
  SearchConfig c;
  try {
    auto& s = c.space;
    for (const auto& v : config.get_all("search", "subset")) s.variable_subsets.push_back(parse_names(v));
    for (const auto& v : config.get_all("search", "date_range")) {
      const auto parts = split(v, ',');
      if (parts.size() != 2) throw Error(ErrorCode::kConfig, "date_range needs 'begin,end': " + v);
      s.date_ranges.push_back({parse_date(trim(parts[0])), parse_date(trim(parts[1]))});
    }
    s.orders = parse_int_list(config.get_or("search", "orders", "1-7"));
    s.rules = parse_int_list(config.get_or("search", "rules", "1,2,3"));
    if (auto target = config.get("search", "target")) {
      for (const auto& subset : s.variable_subsets) {
        if (subset.empty() || subset.front() != *target) {
          throw Error(ErrorCode::kParameter, "subset does not start with target '" + *target + "'");
        }
      }
    }

    auto& sc = c.scoring;
    sc.difference_order = static_cast<int>(config.get_int("scoring", "difference", sc.difference_order));
    sc.log_columns = parse_names(config.get_or("scoring", "log", ""));
    sc.adf_alpha = config.get_double("scoring", "adf_alpha", sc.adf_alpha);
    sc.adf_max_lag = static_cast<int>(config.get_int("scoring", "adf_max_lag", sc.adf_max_lag));
    sc.cointegration_screen = config.get_bool("scoring", "cointegration_screen", sc.cointegration_screen);
    sc.lb_lags = static_cast<int>(config.get_int("scoring", "lb_lags", sc.lb_lags));
    sc.thresholds.alpha = config.get_double("scoring", "alpha", sc.thresholds.alpha);
    sc.thresholds.dw_low = config.get_double("scoring", "dw_low", sc.thresholds.dw_low);
    sc.thresholds.dw_high = config.get_double("scoring", "dw_high", sc.thresholds.dw_high);
    sc.irf_horizon = static_cast<int>(config.get_int("scoring", "irf_horizon", sc.irf_horizon));
    sc.fevd_horizon = static_cast<int>(config.get_int("scoring", "fevd_horizon", sc.fevd_horizon));
    sc.robustness = config.get_bool("scoring", "robustness", sc.robustness);
    sc.jobs = static_cast<int>(config.get_int("scoring", "jobs", sc.jobs));
    for (const auto& e : config.entries()) {
      if (e.section != "signs") continue;
      const auto v = to_lower(trim(e.value));
      if (v != "negative" && v != "positive") {
        throw Error(ErrorCode::kConfig, "sign must be negative or positive: " + e.value);
      }
      sc.signs.push_back({e.key, v == "negative" ? Sign::kNegative : Sign::kPositive});
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig || e.code() == ErrorCode::kParameter) throw;
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (c.scoring.difference_order < 0 || c.scoring.difference_order > 2) {
    throw Error(ErrorCode::kConfig, "difference must be 0, 1 or 2");
  }
  if (c.scoring.irf_horizon < 1 || c.scoring.fevd_horizon < 1) {
    throw Error(ErrorCode::kConfig, "IRF and FEVD horizons must be >= 1");
  }
  c.space.validate();
  return c;
}

std::vector<Combination> enumerate(const SearchSpace& space) {
  std::vector<Combination> out;
  out.reserve(space.size());
  for (const auto& subset : space.variable_subsets) {
    for (const auto& range : space.date_ranges) {
      for (int p : space.orders) {
        for (int rule : space.rules) {
          out.push_back({out.size(), subset, range, p, rule});
        }
      }
    }
  }
  return out;
}

namespace {

std::string fmt(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::string short_p(double p) {
  std::ostringstream os;
  os.precision(4);
  os << p;
  return os.str();
}

int adf_lag_for(int rows, int max_lag) { return std::clamp(std::min(max_lag, rows - 20), 0, max_lag); }

}  // namespace

CandidateResult evaluate(const TimeSeriesFrame& store, const Combination& combination, const ScoringConfig& scoring) {
  CandidateResult r;
  r.params = combination;
  auto fail = [&](std::string gate, std::string detail) {
    r.failed_gate = std::move(gate);
    r.detail = std::move(detail);
    return r;
  };

  TimeSeriesFrame levels;
  try {
    levels = store.select(combination.variables).slice(combination.range.begin, combination.range.end);
  } catch (const Error& e) {
    return fail("window", e.what());
  }
  if (levels.rows() < 3) return fail("window", "fewer than 3 rows in range");
  if (levels.has_missing()) return fail("window", "missing values in range");
  std::vector<std::string> logged;
  for (const auto& name : scoring.log_columns) {
    if (levels.has_column(name)) logged.push_back(name);
  }
  if (!logged.empty()) {
    levels = log_transform(levels, logged, false);
    if (levels.has_missing()) return fail("log", "non-positive values in a logged column");
  }
  const auto frame = scoring.difference_order > 0 ? difference(levels, scoring.difference_order) : levels;
  const int adf_lag = adf_lag_for(static_cast<int>(frame.rows()), scoring.adf_max_lag);

  double worst = 0.0;
  for (std::size_t i = 0; i < frame.cols(); ++i) {
    const auto& name = frame.names()[i];
    double p = 1.0;
    try {
      p = rvar::adf_test(frame.col(i), rvar::AdfRegression::kConstant, adf_lag).p;
    } catch (const Error& e) {
      return fail("adf", name + ": " + e.what());
    }
    worst = std::max(worst, p);
    r.diff_adf_max_p = worst;
    if (!(p < scoring.adf_alpha)) return fail("adf", name + " not stationary (p=" + short_p(p) + ")");
  }

  if (scoring.cointegration_screen && scoring.difference_order > 0) {
    std::vector<std::string> integrated;
    const int level_lag = adf_lag_for(static_cast<int>(levels.rows()), scoring.adf_max_lag);
    for (std::size_t i = 0; i < levels.cols(); ++i) {
      double p = 1.0;
      try {
        p = rvar::adf_test(levels.col(i), rvar::AdfRegression::kConstant, level_lag).p;
      } catch (const Error&) {
      }
      if (!(p < scoring.adf_alpha)) integrated.push_back(levels.names()[i]);
    }
    r.cointegration_ok = true;
    if (integrated.size() >= 2) {
      try {
        const auto eg = rvar::engle_granger(levels.select(integrated), {scoring.adf_alpha, level_lag, 0.0});
        r.cointegration_ok = eg.screen_ok();
        if (eg.cointegrated) {
          std::vector<std::string> pairs;
          for (const auto& pr : eg.pairs) {
            if (pr.p < scoring.adf_alpha) pairs.push_back(pr.dependent + "~" + pr.regressor);
          }
          return fail("cointegration", "cointegrated: " + join(pairs, " "));
        }
      } catch (const Error& e) {
        r.cointegration_ok = false;
        return fail("cointegration", e.what());
      }
    }
  }

  rvar::RestrictionMask mask;
  try {
    mask = build_restriction_mask(frame, combination.order, combination.rule);
  } catch (const Error& e) {
    return fail("granger", e.what());
  }
  r.masked = mask.zero_count();

  try {
    r.model = rvar::fit_restricted_var(frame, combination.order, mask);
  } catch (const Error& e) {
    return fail("fit", e.what());
  }
  const auto& model = *r.model;

  try {
    r.diagnostics = rvar::diagnose(model, frame, {scoring.lb_lags, scoring.adf_max_lag, false});
  } catch (const Error& e) {
    r.model.reset();
    return fail("fit", e.what());
  }
  auto& diag = *r.diagnostics;
  diag.cointegration_ok = r.cointegration_ok;
  r.aic = diag.aic;
  r.bic = diag.bic;
  r.diagnostics_ok = rvar::diagnostics_pass(diag, scoring.thresholds);

  std::string gate;
  std::string detail;
  auto note = [&](const std::string& g, const std::string& d) {
    if (gate.empty()) gate = g;
    if (!detail.empty()) detail += "; ";
    detail += d;
  };
  if (!diag.stability_ok) note("stability", "max eigenvalue modulus " + short_p(diag.max_eigen_modulus));
  const auto& t = scoring.thresholds;
  for (const auto& v : diag.variables) {
    if (!(v.adf_p < t.alpha)) note("residual_adf", v.name + " residual ADF p=" + short_p(v.adf_p));
  }
  for (const auto& v : diag.variables) {
    if (!(v.lb_p > t.alpha)) note("ljung_box", v.name + " Ljung-Box p=" + short_p(v.lb_p));
  }
  for (const auto& v : diag.variables) {
    if (!(v.dw >= t.dw_low && v.dw <= t.dw_high)) note("durbin_watson", v.name + " DW=" + short_p(v.dw));
  }

  try {
    r.explainable = explainable_rate(rvar::fevd(model, scoring.fevd_horizon), 0);
  } catch (const Error& e) {
    note("fevd", e.what());
    r.diagnostics_ok = false;
  }

  const int n = model.n();
  r.irf_signs.assign(static_cast<std::size_t>(std::max(0, n - 1)), 0);
  for (int j = 1; j < n; ++j) {
    const auto resp = rvar::irf(model, j, scoring.irf_horizon).responses;
    const double total = resp.col(0).sum();
    r.irf_signs[static_cast<std::size_t>(j - 1)] = total > 0.0 ? 1 : (total < 0.0 ? -1 : 0);
  }
  r.signs_ok = true;
  for (const auto& req : scoring.signs) {
    const auto it = std::find(model.names.begin() + 1, model.names.end(), req.shock);
    if (it == model.names.end()) continue;
    const int s = r.irf_signs[static_cast<std::size_t>(it - model.names.begin() - 1)];
    const bool ok = req.sign == Sign::kNegative ? s <= 0 : s >= 0;
    if (!ok) {
      r.signs_ok = false;
      note("irf_sign", "response to " + req.shock + " is " + (s > 0 ? "positive" : "negative"));
    }
  }

  r.failed_gate = gate;
  r.detail = detail;
  return r;
}

namespace {

bool better(const CandidateResult& a, const CandidateResult& b) {
  if (a.diagnostics_ok != b.diagnostics_ok) return a.diagnostics_ok;
  if (a.signs_ok != b.signs_ok) return a.signs_ok;
  if (a.bic != b.bic) return a.bic < b.bic;
  if (a.aic != b.aic) return a.aic < b.aic;
  return a.params.index < b.params.index;
}

std::vector<RobustnessCheck> robustness_checks(const TimeSeriesFrame& store, const CandidateResult& winner,
                                               const ScoringConfig& scoring) {
  std::vector<std::pair<std::string, Combination>> variants;
  const auto& base = winner.params;
  for (int dp : {-1, 1}) {
    const int p = base.order + dp;
    if (p < 1 || p > rvar::kMaxOrder) continue;
    auto c = base;
    c.order = p;
    variants.emplace_back(dp < 0 ? "order-1" : "order+1", c);
  }
  const int rows = winner.model ? winner.model->nobs + winner.model->p + scoring.difference_order : 0;
  const int trim_days = rows / 20;
  if (trim_days > 0 && winner.model) {
    auto late = base;
    late.range.begin = std::max(base.range.begin, winner.model->train_begin) + std::chrono::days(trim_days);
    variants.emplace_back("start+" + std::to_string(trim_days) + "d", late);
    auto early = base;
    early.range.end = std::min(base.range.end, winner.model->train_end) - std::chrono::days(trim_days);
    variants.emplace_back("end-" + std::to_string(trim_days) + "d", early);
  }
  std::vector<RobustnessCheck> out;
  for (const auto& [label, c] : variants) {
    const auto r = evaluate(store, c, scoring);
    out.push_back({label, c, r.failed_gate, r.aic, r.bic, r.diagnostics_ok});
  }
  return out;
}

}  // namespace

SearchResult run_search(const TimeSeriesFrame& store, const SearchSpace& space, const ScoringConfig& scoring) {
  space.validate();
  const auto combos = enumerate(space);
  SearchResult result;
  result.candidates.resize(combos.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < combos.size(); i = next++) {
      try {
        result.candidates[i] = evaluate(store, combos[i], scoring);
      } catch (const Error& e) {
        auto& c = result.candidates[i];
        c = CandidateResult{};
        c.params = combos[i];
        c.failed_gate = "error";
        c.detail = e.what();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(scoring.jobs, 1, static_cast<int>(combos.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    if (result.candidates[i].scored()) result.ranking.push_back(i);
  }
  std::sort(result.ranking.begin(), result.ranking.end(),
            [&](std::size_t a, std::size_t b) { return better(result.candidates[a], result.candidates[b]); });

  if (result.ranking.empty() || !result.candidates[result.ranking.front()].admissible()) {
    std::map<std::string, int> counts;
    for (const auto& c : result.candidates) ++counts[c.failed_gate];
    std::string msg = "no admissible model among " + std::to_string(combos.size()) + " combinations (";
    bool first = true;
    for (const auto& [gate, count] : counts) {
      msg += (first ? "" : ", ") + gate + ": " + std::to_string(count);
      first = false;
    }
    msg += ")";
    throw NoModelError(msg, std::move(result));
  }
  result.chosen = result.ranking.front();
  if (scoring.robustness) result.robustness = robustness_checks(store, result.winner(), scoring);
  return result;
}

std::string write_search_log_csv(const SearchResult& result) {
  std::vector<int> rank(result.candidates.size(), 0);
  for (std::size_t k = 0; k < result.ranking.size(); ++k) rank[result.ranking[k]] = static_cast<int>(k + 1);
  const bool has_winner = !result.ranking.empty() && result.candidates[result.chosen].admissible();

  std::ostringstream os;
  os << "index,variables,begin,end,order,rule,verdict,failed_gate,detail,diff_adf_max_p,cointegration,masked,"
        "stable,max_modulus,resid_adf_max_p,lb_min_p,dw_min,dw_max,aic,bic,explainable_rate,irf_signs,rank\n";
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const auto& c = result.candidates[i];
    const auto& p = c.params;
    std::string verdict = "rejected";
    if (c.admissible()) verdict = (has_winner && i == result.chosen) ? "chosen" : "admissible";
    os << p.index << ',' << csv_escape(join(p.variables, ";")) << ',' << format_date(p.range.begin) << ','
       << format_date(p.range.end) << ',' << p.order << ',' << p.rule << ',' << verdict << ',' << c.failed_gate
       << ',' << csv_escape(c.detail) << ',' << fmt(c.diff_adf_max_p) << ','
       << (c.cointegration_ok ? (*c.cointegration_ok ? "pass" : "fail") : "") << ',' << c.masked << ',';
    if (c.diagnostics) {
      const auto& d = *c.diagnostics;
      double adf = 0.0, lb = 1.0, dw_lo = 1e300, dw_hi = -1e300;
      for (const auto& v : d.variables) {
        adf = std::max(adf, v.adf_p);
        lb = std::min(lb, v.lb_p);
        dw_lo = std::min(dw_lo, v.dw);
        dw_hi = std::max(dw_hi, v.dw);
      }
      os << (d.stability_ok ? "true" : "false") << ',' << fmt(d.max_eigen_modulus) << ',' << fmt(adf) << ','
         << fmt(lb) << ',' << fmt(dw_lo) << ',' << fmt(dw_hi) << ',';
    } else {
      os << ",,,,,,";
    }
    std::string signs;
    for (int s : c.irf_signs) signs += s > 0 ? '+' : (s < 0 ? '-' : '0');
    os << fmt(c.aic) << ',' << fmt(c.bic) << ',' << fmt(c.explainable) << ',' << signs << ',';
    if (rank[i] > 0) os << rank[i];
    os << '\n';
  }
  return os.str();
}

std::string write_robustness_csv(const SearchResult& result) {
  std::ostringstream os;
  os << "label,order,begin,end,failed_gate,diagnostics_ok,aic,bic,delta_aic,delta_bic\n";
  const auto& w = result.winner();
  for (const auto& r : result.robustness) {
    os << r.label << ',' << r.params.order << ',' << format_date(r.params.range.begin) << ','
       << format_date(r.params.range.end) << ',' << r.failed_gate << ',' << (r.diagnostics_ok ? "true" : "false")
       << ',' << fmt(r.aic) << ',' << fmt(r.bic) << ',' << fmt(r.aic - w.aic) << ',' << fmt(r.bic - w.bic) << '\n';
  }
  return os.str();
}

}  // namespace loadshift::search
