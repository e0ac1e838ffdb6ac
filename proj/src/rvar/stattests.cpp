#include "loadshift/rvar/stattests.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

#include <array>
#include <cmath>
#include <limits>

#include "loadshift/rvar/ols.hpp"
#include "loadshift/util/error.hpp"

namespace loadshift::rvar {

namespace {

struct Surface {
  double tau_star;
  double tau_min;
  double tau_max;
  std::array<double, 3> small;
  std::array<double, 4> large;
};

// Effective coefficients (scaling already applied).
constexpr Surface kConstant1{-1.61, -18.83, 2.74, {2.1659, 1.4412, 0.038269}, {1.7339, 0.93202, -0.12745, -0.010368}};
constexpr Surface kConstant2{-2.62, -18.86, 0.92, {2.92, 1.5012, 0.039796}, {2.1945, 0.64695, -0.29198, -0.042377}};
constexpr Surface kTrend1{-2.89, -16.18, 0.7, {3.2512, 1.6047, 0.049588}, {2.5261, 0.61654, -0.37956, -0.060285}};

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }

double upper_chi2(double q, int dof) {
  if (!(q > 0)) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), q));
}

struct AdfDesign {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// Rows for dy[t], t = first..m-1, where dy has m entries.
AdfDesign adf_design(const Eigen::VectorXd& level, const Eigen::VectorXd& dy, AdfRegression reg, int lags,
                     Eigen::Index first) {
  const Eigen::Index m = dy.size();
  const Eigen::Index rows = m - first;
  const int det = reg == AdfRegression::kNone ? 0 : reg == AdfRegression::kConstant ? 1 : 2;
  AdfDesign d{Eigen::MatrixXd(rows, 1 + det + lags), Eigen::VectorXd(rows)};
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = first + r;
    d.y(r) = dy(t);
    d.X(r, 0) = level(t);
    if (det >= 1) d.X(r, 1) = 1.0;
    if (det == 2) d.X(r, 2) = static_cast<double>(t + 1);
    for (int k = 1; k <= lags; ++k) d.X(r, det + k) = dy(t - k);
  }
  return d;
}

}  // namespace

double mackinnon_p(double stat, AdfRegression regression, int n_series) {
  const Surface* s = nullptr;
  if (regression == AdfRegression::kConstant && n_series == 1) s = &kConstant1;
  if (regression == AdfRegression::kConstant && n_series == 2) s = &kConstant2;
  if (regression == AdfRegression::kConstantTrend && n_series == 1) s = &kTrend1;
  if (!s) throw Error(ErrorCode::kParameter, "no embedded critical surface for this regression");
  if (std::isnan(stat)) return std::numeric_limits<double>::quiet_NaN();
  if (stat > s->tau_max) return 1.0;
  if (stat < s->tau_min) return 0.0;
  if (stat <= s->tau_star) return normal_cdf(s->small[0] + stat * (s->small[1] + stat * s->small[2]));
  return normal_cdf(s->large[0] + stat * (s->large[1] + stat * (s->large[2] + stat * s->large[3])));
}

namespace {

AdfResult adf_impl(const Eigen::VectorXd& x, AdfRegression reg, int max_lag, AdfRegression surface, int n_series) {
  if (max_lag < 0) throw Error(ErrorCode::kParameter, "max_lag must be >= 0");
  if (x.size() < 20 + max_lag) {
    throw Error(ErrorCode::kInsufficientData, "ADF needs at least 20 + max_lag observations");
  }
  if (!x.allFinite()) throw Error(ErrorCode::kPrecondition, "ADF input has missing values");
  if (x.maxCoeff() == x.minCoeff()) throw Error(ErrorCode::kDegenerate, "ADF on a constant series");

  const Eigen::Index m = x.size() - 1;
  const Eigen::VectorXd dy = x.tail(m) - x.head(m);
  const Eigen::VectorXd level = x.head(m);

  int best = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= max_lag; ++k) {
    const auto d = adf_design(level, dy, reg, k, max_lag);
    double rss;
    try {
      rss = ols(d.X, d.y).rss;
    } catch (const Error&) {
      continue;
    }
    const double n = static_cast<double>(d.y.size());
    const double aic = n * std::log(rss / n) + 2.0 * static_cast<double>(d.X.cols());
    if (aic < best_aic) {
      best_aic = aic;
      best = k;
    }
  }
  const auto d = adf_design(level, dy, reg, best, best);
  OlsFit fit;
  try {
    fit = ols(d.X, d.y, true);
  } catch (const Error& e) {
    throw Error(ErrorCode::kDegenerate, std::string("ADF regression: ") + e.what());
  }
  AdfResult r;
  r.lags = best;
  r.nobs = static_cast<int>(d.y.size());
  const double se = std::sqrt(fit.covariance(0, 0));
  r.stat = se > 0 ? fit.beta(0) / se : -std::numeric_limits<double>::infinity();
  r.p = mackinnon_p(r.stat, surface, n_series);
  return r;
}

}  // namespace

AdfResult adf_test(const Eigen::Ref<const Eigen::VectorXd>& x, AdfRegression regression, int max_lag) {
  if (regression == AdfRegression::kNone) {
    throw Error(ErrorCode::kParameter, "adf_test supports constant or constant+trend regressions");
  }
  return adf_impl(x, regression, max_lag, regression, 1);
}

CointegrationResult engle_granger(const TimeSeriesFrame& frame, const EngleGrangerOptions& options) {
  if (frame.cols() < 2) throw Error(ErrorCode::kPrecondition, "cointegration needs at least two columns");
  if (frame.has_missing()) throw Error(ErrorCode::kPrecondition, "cointegration input has missing values");
  const int max_lag = std::min<int>(options.max_lag, static_cast<int>(frame.rows()) - 21);
  if (max_lag < 0) throw Error(ErrorCode::kInsufficientData, "series too short for cointegration test");
  if (options.stationarity_alpha > 0) {
    for (std::size_t j = 0; j < frame.cols(); ++j) {
      if (adf_test(frame.col(j), AdfRegression::kConstant, max_lag).p < options.stationarity_alpha) {
        throw Error(ErrorCode::kPrecondition, "column " + frame.names()[j] + " is stationary in levels");
      }
    }
  }
  CointegrationResult out;
  const Eigen::Index T = static_cast<Eigen::Index>(frame.rows());
  for (std::size_t i = 0; i < frame.cols(); ++i) {
    for (std::size_t j = i + 1; j < frame.cols(); ++j) {
      Eigen::MatrixXd X(T, 2);
      X.col(0).setOnes();
      X.col(1) = frame.col(j);
      const auto fit = ols(X, frame.col(i), false, {"const", frame.names()[j]});
      CointegrationPair pair{frame.names()[i], frame.names()[j], 0.0, 1.0};
      if (fit.residuals.cwiseAbs().maxCoeff() < 1e-12 * (1.0 + frame.col(i).cwiseAbs().maxCoeff())) {
        // Exact linear relation.
        pair.stat = -std::numeric_limits<double>::infinity();
        pair.p = 0.0;
      } else {
        const auto adf = adf_impl(fit.residuals, AdfRegression::kNone, max_lag, AdfRegression::kConstant, 2);
        pair.stat = adf.stat;
        pair.p = adf.p;
      }
      if (pair.p < options.alpha) out.cointegrated = true;
      out.pairs.push_back(pair);
    }
  }
  return out;
}

double granger_wald(const TimeSeriesFrame& frame, const std::string& cause, const std::string& effect, int lags) {
  if (lags <= 0) throw Error(ErrorCode::kParameter, "Granger test needs lags >= 1");
  const auto ci = static_cast<Eigen::Index>(frame.index_of(cause));
  const auto ei = static_cast<Eigen::Index>(frame.index_of(effect));
  const auto T = static_cast<Eigen::Index>(frame.rows());
  if (T <= 5 * lags) throw Error(ErrorCode::kInsufficientData, "Granger test needs more than 5 x lags rows");
  if (frame.has_missing()) throw Error(ErrorCode::kPrecondition, "Granger input has missing values");
  if (ci == ei) throw Error(ErrorCode::kCollinearity, "cause and effect are the same column");

  const auto& v = frame.values();
  const Eigen::Index rows = T - lags;
  Eigen::MatrixXd Xu(rows, 1 + 2 * lags);
  Eigen::VectorXd y(rows);
  std::vector<std::string> names{"const"};
  for (int k = 1; k <= lags; ++k) names.push_back(effect + ".L" + std::to_string(k));
  for (int k = 1; k <= lags; ++k) names.push_back(cause + ".L" + std::to_string(k));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = r + lags;
    y(r) = v(t, ei);
    Xu(r, 0) = 1.0;
    for (int k = 1; k <= lags; ++k) {
      Xu(r, k) = v(t - k, ei);
      Xu(r, lags + k) = v(t - k, ci);
    }
  }
  const auto unrestricted = ols(Xu, y, false, names);
  const auto restricted = ols(Xu.leftCols(1 + lags), y, false, names);
  const double df2 = static_cast<double>(rows - Xu.cols());
  if (unrestricted.rss <= 0.0) {
    throw Error(ErrorCode::kDegenerate, "Granger test: effect equation fits exactly");
  }
  const double f = ((restricted.rss - unrestricted.rss) / lags) / (unrestricted.rss / df2);
  if (!(f > 0.0)) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f(lags, df2), f));
}

Eigen::VectorXd autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& x, int lags) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd c = x.array() - x.mean();
  const double denom = c.squaredNorm();
  if (!(denom > 0.0)) throw Error(ErrorCode::kDegenerate, "autocorrelation of a constant series");
  Eigen::VectorXd rho(lags);
  for (int k = 1; k <= lags; ++k) rho(k - 1) = c.tail(n - k).dot(c.head(n - k)) / denom;
  return rho;
}

LjungBoxResult ljung_box_from_acf(const Eigen::Ref<const Eigen::VectorXd>& rho, int n) {
  const int h = static_cast<int>(rho.size());
  if (h < 1 || h >= n) throw Error(ErrorCode::kParameter, "Ljung-Box needs 1 <= h < n");
  double q = 0.0;
  for (int i = 1; i <= h; ++i) q += rho(i - 1) * rho(i - 1) / static_cast<double>(n - i);
  q *= static_cast<double>(n) * (n + 2.0);
  return {q, upper_chi2(q, h), h};
}

LjungBoxResult ljung_box(const Eigen::Ref<const Eigen::VectorXd>& residual, int lags) {
  const int n = static_cast<int>(residual.size());
  if (lags < 1 || lags >= n) throw Error(ErrorCode::kParameter, "Ljung-Box needs 1 <= h < n");
  return ljung_box_from_acf(autocorrelation(residual, lags), n);
}

double durbin_watson(const Eigen::Ref<const Eigen::VectorXd>& residual) {
  const Eigen::Index n = residual.size();
  if (n < 2) throw Error(ErrorCode::kInsufficientData, "Durbin-Watson needs at least 2 residuals");
  const double denom = residual.squaredNorm();
  if (!(denom > 0.0)) throw Error(ErrorCode::kDegenerate, "Durbin-Watson on an all-zero residual");
  return (residual.tail(n - 1) - residual.head(n - 1)).squaredNorm() / denom;
}

}  // namespace loadshift::rvar
