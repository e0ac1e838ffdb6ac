#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "loadshift/core/frame.hpp"

namespace loadshift::rvar {

enum class AdfRegression { kNone, kConstant, kConstantTrend };

struct AdfResult {
  double stat = 0.0;
  double p = 1.0;
  int lags = 0;
  int nobs = 0;
};

/// MacKinnon (1994/2010) response-surface p-value for a Dickey-Fuller type
/// statistic. `n_series` is 1 for a unit-root test and 2 for a two-variable
/// Engle-Granger residual test. Only the constant and constant+trend surfaces
/// are embedded (plus n_series=2 with a constant).
double mackinnon_p(double stat, AdfRegression regression, int n_series = 1);

/// Augmented Dickey-Fuller test. The lag order minimizes AIC over
/// 0..max_lag on a common sample, then the chosen regression is refit on all
/// usable rows. Requires x.size() >= 20 + max_lag.
AdfResult adf_test(const Eigen::Ref<const Eigen::VectorXd>& x,
                   AdfRegression regression = AdfRegression::kConstant, int max_lag = 12);

struct CointegrationPair {
  std::string dependent;
  std::string regressor;
  double stat = 0.0;
  double p = 1.0;
};

struct CointegrationResult {
  bool cointegrated = false;
  // Screening passes when no pair is cointegrated.
  bool screen_ok() const { return !cointegrated; }
  std::vector<CointegrationPair> pairs;
};

struct EngleGrangerOptions {
  double alpha = 0.05;
  int max_lag = 12;
  // Columns whose level ADF p-value falls below this are rejected as
  // stationary; 0 skips the check.
  double stationarity_alpha = 0.05;
};

/// Pairwise two-step Engle-Granger over every column pair (i < j): OLS of
/// column i on a constant and column j, then an ADF on the residuals with
/// the two-variable critical surface.
CointegrationResult engle_granger(const TimeSeriesFrame& frame, const EngleGrangerOptions& options = {});

/// F form of the Wald test that the `lags` lags of `cause` add nothing to an
/// equation for `effect` with a constant and its own `lags` lags.
double granger_wald(const TimeSeriesFrame& frame, const std::string& cause, const std::string& effect, int lags);

struct LjungBoxResult {
  double q = 0.0;
  double p = 1.0;
  int lags = 0;
};

LjungBoxResult ljung_box(const Eigen::Ref<const Eigen::VectorXd>& residual, int lags = 40);
// Q from given autocorrelations rho_1..rho_h of a length-n series.
LjungBoxResult ljung_box_from_acf(const Eigen::Ref<const Eigen::VectorXd>& rho, int n);
Eigen::VectorXd autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& x, int lags);

double durbin_watson(const Eigen::Ref<const Eigen::VectorXd>& residual);

}  // namespace loadshift::rvar
