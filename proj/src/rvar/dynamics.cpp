#include "loadshift/rvar/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::rvar {

StabilityResult stability_test(const RVarModel& model, bool strict) {
  const Eigen::MatrixXd C = companion_matrix(model.A);
  StabilityResult r;
  if (C.size() > 0) {
    const Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    for (Eigen::Index k = 0; k < ev.size(); ++k) r.moduli.push_back(std::abs(ev(k)));
  }
  std::sort(r.moduli.begin(), r.moduli.end(), std::greater<>());
  r.stable = strict ? r.max_modulus() < 1.0 : r.max_modulus() <= 1.0;
  return r;
}

IrfResult irf(const RVarModel& model, int shock, int horizon) {
  const int n = model.n();
  if (shock < 0 || shock >= n) throw Error(ErrorCode::kParameter, "shock index out of range");
  if (horizon < 0) throw Error(ErrorCode::kParameter, "horizon must be >= 0");
  IrfResult r{shock, horizon, Eigen::MatrixXd::Zero(horizon + 1, n)};
  r.responses(0, shock) = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    for (int i = 1; i <= std::min(t, model.p); ++i) {
      r.responses.row(t) += (model.A[static_cast<std::size_t>(i - 1)] * r.responses.row(t - i).transpose()).transpose();
    }
  }
  return r;
}

CumulativeIrf irf_cumulative(const RVarModel& model, const IrfResult& irf, int max_iterations) {
  if (!stability_test(model, true).stable) {
    throw Error(ErrorCode::kDivergence, "cumulative response of a model that is not strictly stable");
  }
  const int n = model.n();
  const int p = model.p;
  CumulativeIrf out;
  out.cumulative = irf.responses;
  for (Eigen::Index t = 1; t < out.cumulative.rows(); ++t) out.cumulative.row(t) += out.cumulative.row(t - 1);

  // Continue the recursion on a rolling window of the last p responses.
  std::vector<Eigen::VectorXd> hist;
  for (int t = 0; t <= irf.horizon; ++t) hist.push_back(irf.responses.row(t).transpose());
  Eigen::VectorXd total = out.cumulative.row(irf.horizon).transpose();
  int t = irf.horizon;
  int quiet = 0;
  while (true) {
    ++t;
    if (t > max_iterations) throw Error(ErrorCode::kDivergence, "cumulative response did not converge");
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    for (int i = 1; i <= std::min(t, p); ++i) {
      next += model.A[static_cast<std::size_t>(i - 1)] * hist[hist.size() - static_cast<std::size_t>(i)];
    }
    total += next;
    hist.push_back(next);
    if (hist.size() > static_cast<std::size_t>(p) + 1) hist.erase(hist.begin());
    // A single small step can be a zero crossing; require p in a row.
    quiet = next.cwiseAbs().maxCoeff() < 1e-10 ? quiet + 1 : 0;
    if (quiet >= p) break;
  }
  out.long_run = total;
  out.iterations = t;
  return out;
}

FevdResult fevd(const RVarModel& model, int horizon, const std::vector<int>& ordering) {
  const int n = model.n();
  if (horizon < 1) throw Error(ErrorCode::kParameter, "FEVD horizon must be >= 1");
  std::vector<int> order = ordering;
  if (order.empty()) {
    for (int i = 0; i < n; ++i) order.push_back(i);
  }
  {
    std::vector<int> check = order;
    std::sort(check.begin(), check.end());
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(check.size()) != n || check[static_cast<std::size_t>(i)] != i) {
        throw Error(ErrorCode::kParameter, "ordering is not a permutation of the variables");
      }
    }
  }

  // Cholesky of the permuted covariance, mapped back: column b of P is the
  // response to the orthogonal shock of variable order[b].
  Eigen::MatrixXd S(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) S(a, b) = model.sigma_e(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
  const Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::kFactorization, "residual covariance is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) P(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]) = L(a, b);

  const Eigen::MatrixXd C = companion_matrix(model.A);
  const Eigen::Index np = C.rows();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(np, np);  // A^k
  FevdResult r;
  r.horizon = horizon;
  r.mse = Eigen::MatrixXd::Zero(horizon, n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);  // sum_k (B_k)_{ij}^2
  for (int h = 1; h <= horizon; ++h) {
    const Eigen::MatrixXd phi = power.topLeftCorner(n, n);  // J A^k J'
    const Eigen::MatrixXd B = phi * P;
    acc += B.cwiseAbs2();
    const Eigen::VectorXd total = acc.rowwise().sum();
    r.mse.row(h - 1) = total.transpose();
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i) w.row(i) = acc.row(i) / total(i);
    r.w.push_back(std::move(w));
    power = power * C;
  }
  return r;
}

std::string write_irf_csv(const RVarModel& model, const std::vector<IrfResult>& irfs) {
  std::ostringstream os;
  os << "h,i,j,value\n";
  for (const auto& r : irfs) {
    for (Eigen::Index t = 0; t < r.responses.rows(); ++t) {
      for (int i = 0; i < model.n(); ++i) {
        os << t << ',' << model.names[static_cast<std::size_t>(i)] << ',' << model.names[static_cast<std::size_t>(r.shock)]
           << ',' << format_double(r.responses(t, i)) << '\n';
      }
    }
  }
  return os.str();
}

std::string write_fevd_csv(const RVarModel& model, const FevdResult& f) {
  std::ostringstream os;
  os << "h,i,j,value\n";
  for (int h = 1; h <= f.horizon; ++h) {
    const auto& w = f.w[static_cast<std::size_t>(h - 1)];
    for (int i = 0; i < model.n(); ++i) {
      for (int j = 0; j < model.n(); ++j) {
        os << h << ',' << model.names[static_cast<std::size_t>(i)] << ',' << model.names[static_cast<std::size_t>(j)] << ','
           << format_double(w(i, j)) << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace loadshift::rvar
