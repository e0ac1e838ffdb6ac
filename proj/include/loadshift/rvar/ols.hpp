#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace loadshift::rvar {

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  // sigma^2 (X'X)^-1 with sigma^2 = rss / (rows - cols). Only filled when
  // requested.
  Eigen::MatrixXd covariance;
};

/// Least squares via column-pivoted QR. Throws kCollinearity when X is rank
/// deficient; the message names the dropped columns using `column_names`
/// when given.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool with_covariance = false,
           const std::vector<std::string>& column_names = {});

}  // namespace loadshift::rvar
