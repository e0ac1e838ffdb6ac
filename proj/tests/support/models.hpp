#pragma once

// Random VAR models, simulators and small reference algorithms shared by the
// rvar unit tests and the acceptance suite.

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "loadshift/core/frame.hpp"
#include "loadshift/rvar/dynamics.hpp"
#include "loadshift/rvar/model.hpp"

namespace loadshift::testkit {

using rvar::RestrictionMask;
using rvar::RVarModel;
using rvar::companion_matrix;

inline std::vector<Date> day_range(std::size_t n) {
  std::vector<Date> d;
  for (std::size_t i = 0; i < n; ++i) d.push_back(make_date(2019, 1, 1) + std::chrono::days{static_cast<int>(i)});
  return d;
}

inline std::vector<std::string> var_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

inline TimeSeriesFrame make_frame(const Eigen::MatrixXd& v) {
  return TimeSeriesFrame(day_range(static_cast<std::size_t>(v.rows())), var_names(static_cast<int>(v.cols())), v);
}

inline Eigen::VectorXd random_walk(std::mt19937_64& rng, int T) {
  std::normal_distribution<double> z;
  Eigen::VectorXd x(T);
  double s = 0;
  for (int t = 0; t < T; ++t) x(t) = (s += z(rng));
  return x;
}

inline Eigen::VectorXd ar1(std::mt19937_64& rng, int T, double phi) {
  std::normal_distribution<double> z;
  Eigen::VectorXd x(T);
  double s = 0;
  for (int t = 0; t < T; ++t) x(t) = s = phi * s + z(rng);
  return x;
}

inline RVarModel model_from(std::vector<Eigen::MatrixXd> A, Eigen::VectorXd c, Eigen::MatrixXd sigma) {
  RVarModel m;
  const int n = static_cast<int>(A.front().rows());
  m.names = var_names(n);
  m.p = static_cast<int>(A.size());
  m.A = std::move(A);
  m.c = std::move(c);
  m.mask = RestrictionMask(m.p, n);
  m.sigma_e = std::move(sigma);
  return m;
}

// Simulates x_t = c + sum A_k x_{t-k} + u_t from zero initial values.
inline Eigen::MatrixXd simulate(const RVarModel& m, int T, std::mt19937_64* rng, int burn = 0) {
  const int n = m.n();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(T + burn, n);
  Eigen::MatrixXd L;
  if (rng) L = m.sigma_e.llt().matrixL();
  std::normal_distribution<double> z;
  for (int t = 0; t < T + burn; ++t) {
    Eigen::VectorXd v = m.c;
    for (int k = 1; k <= m.p && k <= t; ++k) v += m.A[k - 1] * x.row(t - k).transpose();
    if (rng) {
      Eigen::VectorXd e(n);
      for (int i = 0; i < n; ++i) e(i) = z(*rng);
      v += L * e;
    }
    x.row(t) = v.transpose();
  }
  return x.bottomRows(T);
}

// Random model scaled so the companion spectral radius equals `radius`.
inline RVarModel random_stable_model(std::mt19937_64& rng, int n, int p, double radius) {
  std::normal_distribution<double> z;
  std::vector<Eigen::MatrixXd> A;
  for (int k = 0; k < p; ++k) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = z(rng) * 0.4;
    A.push_back(a);
  }
  const Eigen::MatrixXd C = companion_matrix(A);
  const double rho = Eigen::EigenSolver<Eigen::MatrixXd>(C, false).eigenvalues().cwiseAbs().maxCoeff();
  const double s = radius / rho;
  double f = s;
  for (auto& a : A) {
    a *= f;
    f *= s;
  }
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = z(rng);
  Eigen::MatrixXd sigma = B * B.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = z(rng);
  return model_from(A, c, sigma);
}

// Durand-Kerner roots of the monic polynomial z^p + a[p-1] z^{p-1} + ... + a[0].
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& a) {
  const std::size_t p = a.size();
  std::vector<std::complex<double>> r(p);
  for (std::size_t k = 0; k < p; ++k) r[k] = std::pow(std::complex<double>(0.4, 0.9), static_cast<double>(k));
  auto eval = [&](std::complex<double> z) {
    std::complex<double> v = 1.0;
    for (std::size_t k = p; k-- > 0;) v = v * z + a[k];
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t k = 0; k < p; ++k) {
      std::complex<double> d = 1.0;
      for (std::size_t j = 0; j < p; ++j)
        if (j != k) d *= r[k] - r[j];
      r[k] -= eval(r[k]) / d;
    }
  }
  return r;
}

}  // namespace loadshift::testkit
