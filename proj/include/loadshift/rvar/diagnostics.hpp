#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loadshift/rvar/model.hpp"

namespace loadshift::rvar {

struct VariableDiagnostics {
  std::string name;
  double adf_p = 1.0;  // residual ADF
  double lb_q = 0.0;
  double lb_p = 1.0;
  double dw = 2.0;
};

struct DiagnosticsReport {
  std::vector<VariableDiagnostics> variables;
  // Screening result of the levels cointegration test; unset when not run.
  std::optional<bool> cointegration_ok;
  bool stability_ok = false;
  double max_eigen_modulus = 0.0;
  double aic = 0.0;
  double bic = 0.0;
};

struct DiagnosticsOptions {
  int lb_lags = 40;
  int adf_max_lag = 12;
  bool strict_stability = false;
};

// Lags are clamped to what the residual length supports.
DiagnosticsReport diagnose(const RVarModel& model, const TimeSeriesFrame& frame, const DiagnosticsOptions& options = {});

struct DiagnosticThresholds {
  double alpha = 0.05;
  double dw_low = 1.5;
  double dw_high = 2.5;
};

// Residual ADF rejects (p < alpha), Ljung-Box does not reject (p > alpha), DW
// within [dw_low, dw_high], stable, and cointegration screening passed when it
// was run.
bool diagnostics_pass(const DiagnosticsReport& report, const DiagnosticThresholds& thresholds = {});

// "variable,adf_p,lb_q,lb_p,dw" rows followed by model-level rows.
std::string write_diagnostics_csv(const DiagnosticsReport& report);

}  // namespace loadshift::rvar
