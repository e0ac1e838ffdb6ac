#include "loadshift/rvar/ols.hpp"

#include "loadshift/util/error.hpp"

namespace loadshift::rvar {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool with_covariance,
           const std::vector<std::string>& column_names) {
  if (X.rows() != y.size()) throw Error(ErrorCode::kSize, "design and response lengths differ");
  if (X.rows() < X.cols()) {
    throw Error(ErrorCode::kInsufficientData, "fewer observations than regressors");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  qr.setThreshold(1e-10);
  qr.compute(X);
  if (qr.rank() < X.cols()) {
    std::string which;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < X.cols(); ++k) {
      const auto c = static_cast<std::size_t>(perm(k));
      if (!which.empty()) which += ", ";
      which += c < column_names.size() ? column_names[c] : "column " + std::to_string(c);
    }
    throw Error(ErrorCode::kCollinearity, "rank-deficient design; linearly dependent: " + which);
  }
  OlsFit fit;
  fit.beta = qr.solve(y);
  fit.residuals = y - X * fit.beta;
  fit.rss = fit.residuals.squaredNorm();
  if (with_covariance) {
    const double dof = static_cast<double>(X.rows() - X.cols());
    const double s2 = dof > 0 ? fit.rss / dof : 0.0;
    // (X'X)^-1 = P R^-1 R^-T P'
    const Eigen::Index k = X.cols();
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd inner = Rinv * Rinv.transpose();
    const Eigen::MatrixXd P = qr.colsPermutation();
    fit.covariance = s2 * P * inner * P.transpose();
  }
  return fit;
}

}  // namespace loadshift::rvar
