#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "loadshift/core/frame.hpp"
#include "loadshift/rvar/diagnostics.hpp"
#include "loadshift/rvar/dynamics.hpp"
#include "loadshift/rvar/model.hpp"
#include "loadshift/util/config.hpp"
#include "loadshift/util/error.hpp"

namespace loadshift::search {

/// Rule 1 pins the lagged effect of every other variable on the first column
/// (the target) to zero. Rules 2 and 3 additionally zero (effect i, cause j)
/// at every lag when the Granger p-value of j on i exceeds 0.1 or 0.05.
rvar::RestrictionMask build_restriction_mask(const TimeSeriesFrame& frame, int p, int rule);

// 100 * (1 - w[h](target, target)). horizon is 1-based; 0 means the last step.
double explainable_rate(const rvar::FevdResult& fevd, int target, int horizon = 0);

struct DateRange {
  Date begin{};
  Date end{};
  friend bool operator==(const DateRange&, const DateRange&) = default;
};

struct SearchSpace {
  std::vector<std::vector<std::string>> variable_subsets;  // target first in each
  std::vector<DateRange> date_ranges;
  std::vector<int> orders;
  std::vector<int> rules;

  std::size_t size() const {
    return variable_subsets.size() * date_ranges.size() * orders.size() * rules.size();
  }
  // kParameter on an empty axis, a subset without the shared target first,
  // duplicate names, orders outside 1..7, rules outside 1..3 or a reversed range.
  void validate() const;
};

enum class Sign { kNegative, kPositive };

// The cumulative response of the target to a unit shock in `shock` over the
// IRF horizon must be <= 0 (kNegative) or >= 0 (kPositive). Requirements on
// variables missing from a subset do not apply to it.
struct SignRequirement {
  std::string shock;
  Sign sign = Sign::kNegative;
};

struct ScoringConfig {
  int difference_order = 1;
  std::vector<std::string> log_columns;
  double adf_alpha = 0.05;
  int adf_max_lag = 12;
  bool cointegration_screen = true;
  int lb_lags = 40;
  rvar::DiagnosticThresholds thresholds;
  int irf_horizon = 10;
  int fevd_horizon = 10;
  std::vector<SignRequirement> signs;
  bool robustness = true;
  int jobs = 1;
};

struct SearchConfig {
  SearchSpace space;
  ScoringConfig scoring;
};

/// Sections [search] (target, subset*, date_range*, orders, rules),
/// [scoring] and [signs] (shock = negative|positive).
SearchConfig parse_search_config(const KeyValueConfig& config);

struct Combination {
  std::size_t index = 0;
  std::vector<std::string> variables;
  DateRange range;
  int order = 1;
  int rule = 1;
};

// Index order: subsets outermost, then date ranges, orders, rules.
std::vector<Combination> enumerate(const SearchSpace& space);

struct CandidateResult {
  Combination params;
  // First gate that failed; empty when every gate passed.
  std::string failed_gate;
  std::string detail;

  double diff_adf_max_p = kMissing;
  std::optional<bool> cointegration_ok;
  int masked = 0;
  std::optional<rvar::RVarModel> model;
  std::optional<rvar::DiagnosticsReport> diagnostics;
  bool diagnostics_ok = false;
  double aic = kMissing;
  double bic = kMissing;
  double explainable = kMissing;
  // Sign of the cumulative target response to each non-target variable.
  std::vector<int> irf_signs;
  bool signs_ok = false;

  bool scored() const { return model.has_value(); }
  bool admissible() const { return diagnostics_ok && signs_ok; }
};

struct RobustnessCheck {
  std::string label;
  Combination params;
  std::string failed_gate;
  double aic = kMissing;
  double bic = kMissing;
  bool diagnostics_ok = false;
};

struct SearchResult {
  std::vector<CandidateResult> candidates;  // combination index order
  std::vector<std::size_t> ranking;         // scored candidates, best first
  std::size_t chosen = 0;
  std::vector<RobustnessCheck> robustness;

  const CandidateResult& winner() const { return candidates[chosen]; }
};

class NoModelError : public Error {
 public:
  NoModelError(const std::string& message, SearchResult partial)
      : Error(ErrorCode::kNoModel, message), partial_(std::move(partial)) {}
  const SearchResult& partial() const { return partial_; }

 private:
  SearchResult partial_;
};

// Runs one combination through every gate; never throws for data problems.
CandidateResult evaluate(const TimeSeriesFrame& store, const Combination& combination, const ScoringConfig& scoring);

/// Evaluates every combination (in parallel with scoring.jobs threads) and
/// ranks scored candidates by (diagnostics pass, signs, BIC, AIC, index).
/// Throws NoModelError when the best candidate is not admissible.
SearchResult run_search(const TimeSeriesFrame& store, const SearchSpace& space, const ScoringConfig& scoring);

std::string write_search_log_csv(const SearchResult& result);
std::string write_robustness_csv(const SearchResult& result);

}  // namespace loadshift::search
