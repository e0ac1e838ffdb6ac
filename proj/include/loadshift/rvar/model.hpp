#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include "loadshift/core/frame.hpp"

namespace loadshift::rvar {

/// Zero constraints for a VAR(p): zeroed(k, i, j) pins the coefficient of
/// variable j at lag k (1-based) in the equation for variable i to 0.
class RestrictionMask {
 public:
  RestrictionMask() = default;
  RestrictionMask(int order, int n) : p_(order), n_(n), bits_(static_cast<std::size_t>(order * n * n), 0) {}

  int order() const { return p_; }
  int size() const { return n_; }
  bool zeroed(int lag, int i, int j) const { return bits_[offset(lag, i, j)] != 0; }
  void set(int lag, int i, int j, bool zero = true) { bits_[offset(lag, i, j)] = zero ? 1 : 0; }
  // Zeroes (i, j) at every lag.
  void set_all_lags(int i, int j, bool zero = true);
  int zero_count() const;
  int free_count() const { return p_ * n_ * n_ - zero_count(); }

  friend bool operator==(const RestrictionMask&, const RestrictionMask&) = default;

 private:
  std::size_t offset(int lag, int i, int j) const {
    return static_cast<std::size_t>(((lag - 1) * n_ + i) * n_ + j);
  }
  int p_ = 0;
  int n_ = 0;
  std::vector<char> bits_;
};

struct RVarModel {
  std::vector<std::string> names;
  int p = 0;
  std::vector<Eigen::MatrixXd> A;  // A[k - 1] is the lag-k matrix
  Eigen::VectorXd c;
  RestrictionMask mask;
  Eigen::MatrixXd sigma_e;
  Date train_begin{};
  Date train_end{};
  int nobs = 0;  // residual count, rows - p

  int n() const { return static_cast<int>(names.size()); }
};

inline constexpr int kMaxOrder = 7;

/// Equation-by-equation OLS with masked regressors dropped. The intercept is
/// always free; sigma_e = E'E / (T - p).
RVarModel fit_restricted_var(const TimeSeriesFrame& frame, int p, const RestrictionMask& mask);
RVarModel fit_restricted_var(const TimeSeriesFrame& frame, int p);

/// e_t = x_t - c - sum_k A_k x_{t-k} for rows p.. of the frame.
TimeSeriesFrame residuals(const RVarModel& model, const TimeSeriesFrame& frame);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
  int free_parameters = 0;
  int nobs = 0;
};

/// ln det S + 2k/T and ln det S + k ln(T)/T with S = E'E/T over the T = rows - p
/// residuals and k = unmasked coefficients + n intercepts.
InformationCriteria information_criteria(const RVarModel& model, const TimeSeriesFrame& frame);

// Plain-text model file; doubles are written shortest-round-trip so a
// write/read cycle is bit-exact.
std::string write_model(const RVarModel& model);
RVarModel read_model(std::string_view text);

}  // namespace loadshift::rvar
