#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "loadshift/rvar/model.hpp"

namespace loadshift::rvar {

/// np x np companion matrix: first block row [A_1 ... A_p], identity blocks
/// below the diagonal.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> companion_matrix(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& A) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index p = static_cast<Eigen::Index>(A.size());
  const Eigen::Index n = p ? A.front().rows() : 0;
  Mat C = Mat::Zero(n * p, n * p);
  for (Eigen::Index k = 0; k < p; ++k) C.block(0, k * n, n, n) = A[static_cast<std::size_t>(k)];
  if (p > 1) C.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return C;
}

struct StabilityResult {
  bool stable = false;
  std::vector<double> moduli;  // descending
  double max_modulus() const { return moduli.empty() ? 0.0 : moduli.front(); }
};

/// Companion eigenvalue moduli. Stable when every modulus is <= 1, or < 1
/// when `strict`.
StabilityResult stability_test(const RVarModel& model, bool strict = false);

struct IrfResult {
  int shock = 0;  // 0-based variable index
  int horizon = 0;
  Eigen::MatrixXd responses;  // (horizon + 1) x n, row t = R(t)
};

/// Non-orthogonalized responses: R(0) = e_shock, R(t) = sum_i A_i R(t - i).
IrfResult irf(const RVarModel& model, int shock, int horizon);

struct CumulativeIrf {
  Eigen::MatrixXd cumulative;  // running sums of IrfResult::responses
  Eigen::VectorXd long_run;    // sum to convergence
  int iterations = 0;
};

/// Requires strict stability (kDivergence otherwise). The long-run sum
/// continues the recursion until every increment is below 1e-10.
CumulativeIrf irf_cumulative(const RVarModel& model, const IrfResult& irf, int max_iterations = 1000000);

struct FevdResult {
  int horizon = 0;
  std::vector<Eigen::MatrixXd> w;  // w[h-1](i, j), h = 1..horizon
  Eigen::MatrixXd mse;             // horizon x n
};

/// Cholesky-orthogonalized forecast error variance decomposition. `ordering`
/// lists variable indices in causal order (empty = model order).
FevdResult fevd(const RVarModel& model, int horizon, const std::vector<int>& ordering = {});

// Long format "h,i,j,value" with variable names for i and j.
std::string write_irf_csv(const RVarModel& model, const std::vector<IrfResult>& irfs);
std::string write_fevd_csv(const RVarModel& model, const FevdResult& fevd);

}  // namespace loadshift::rvar
