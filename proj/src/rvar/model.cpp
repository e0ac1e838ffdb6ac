#include "loadshift/rvar/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loadshift/rvar/ols.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::rvar {

void RestrictionMask::set_all_lags(int i, int j, bool zero) {
  for (int k = 1; k <= p_; ++k) set(k, i, j, zero);
}

int RestrictionMask::zero_count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

RVarModel fit_restricted_var(const TimeSeriesFrame& frame, int p) {
  return fit_restricted_var(frame, p, RestrictionMask(p, static_cast<int>(frame.cols())));
}

RVarModel fit_restricted_var(const TimeSeriesFrame& frame, int p, const RestrictionMask& mask) {
  const int n = static_cast<int>(frame.cols());
  if (p < 1 || p > kMaxOrder) throw Error(ErrorCode::kParameter, "VAR order must be in [1, 7]");
  if (mask.order() != p || mask.size() != n) throw Error(ErrorCode::kParameter, "mask shape does not match");
  if (static_cast<int>(frame.rows()) <= n * p + 10) {
    throw Error(ErrorCode::kInsufficientData, "VAR fit needs more than n*p + 10 rows");
  }
  if (frame.has_missing()) throw Error(ErrorCode::kPrecondition, "VAR input has missing values");

  const auto& v = frame.values();
  const Eigen::Index T = v.rows() - p;
  RVarModel m;
  m.names = frame.names();
  m.p = p;
  m.A.assign(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(n, n));
  m.c = Eigen::VectorXd::Zero(n);
  m.mask = mask;
  m.train_begin = frame.dates().front();
  m.train_end = frame.dates().back();
  m.nobs = static_cast<int>(T);

  Eigen::MatrixXd E(T, n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, int>> regs;  // (lag, var)
    std::vector<std::string> labels{"const"};
    for (int k = 1; k <= p; ++k) {
      for (int j = 0; j < n; ++j) {
        if (mask.zeroed(k, i, j)) continue;
        regs.emplace_back(k, j);
        labels.push_back(m.names[static_cast<std::size_t>(j)] + ".L" + std::to_string(k));
      }
    }
    Eigen::MatrixXd X(T, 1 + static_cast<Eigen::Index>(regs.size()));
    X.col(0).setOnes();
    for (std::size_t r = 0; r < regs.size(); ++r) {
      X.col(static_cast<Eigen::Index>(r + 1)) = v.col(regs[r].second).segment(p - regs[r].first, T);
    }
    OlsFit fit;
    try {
      fit = ols(X, v.col(i).tail(T), false, labels);
    } catch (const Error& e) {
      throw Error(e.code(), "equation " + m.names[static_cast<std::size_t>(i)] + ": " + e.what());
    }
    m.c(i) = fit.beta(0);
    for (std::size_t r = 0; r < regs.size(); ++r) {
      m.A[static_cast<std::size_t>(regs[r].first - 1)](i, regs[r].second) = fit.beta(static_cast<Eigen::Index>(r + 1));
    }
    E.col(i) = fit.residuals;
  }
  m.sigma_e = (E.transpose() * E) / static_cast<double>(T);
  m.sigma_e = 0.5 * (m.sigma_e + m.sigma_e.transpose()).eval();
  return m;
}

TimeSeriesFrame residuals(const RVarModel& model, const TimeSeriesFrame& frame) {
  if (frame.names() != model.names) throw Error(ErrorCode::kSchema, "frame columns do not match the model");
  const int p = model.p;
  if (static_cast<int>(frame.rows()) <= p) throw Error(ErrorCode::kInsufficientData, "frame shorter than p + 1");
  const auto& v = frame.values();
  const Eigen::Index T = v.rows() - p;
  Eigen::MatrixXd E = v.bottomRows(T);
  E.rowwise() -= model.c.transpose();
  for (int k = 1; k <= p; ++k) E.noalias() -= v.middleRows(p - k, T) * model.A[static_cast<std::size_t>(k - 1)].transpose();
  return TimeSeriesFrame(std::vector<Date>(frame.dates().begin() + p, frame.dates().end()), model.names, std::move(E));
}

InformationCriteria information_criteria(const RVarModel& model, const TimeSeriesFrame& frame) {
  const auto e = residuals(model, frame);
  const double T = static_cast<double>(e.rows());
  const Eigen::MatrixXd S = e.values().transpose() * e.values() / T;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  const double det = S.determinant();
  if (ldlt.info() != Eigen::Success || !(det > 0.0) || !std::isfinite(std::log(det))) {
    throw Error(ErrorCode::kDegenerate, "residual covariance is singular");
  }
  InformationCriteria ic;
  ic.free_parameters = model.mask.free_count() + model.n();
  ic.nobs = static_cast<int>(T);
  const double logdet = std::log(det);
  ic.aic = logdet + 2.0 * ic.free_parameters / T;
  ic.bic = logdet + ic.free_parameters * std::log(T) / T;
  return ic;
}

namespace {

void write_matrix(std::ostringstream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << format_double(m(r, c));
    os << '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : lines_(split(text, '\n')) {}
  std::vector<std::string> next() {
    while (pos_ < lines_.size()) {
      const auto line = trim(lines_[pos_++]);
      if (!line.empty()) return split(line, ' ');
    }
    throw Error(ErrorCode::kSchema, "model file ended early");
  }
  std::vector<std::string> expect(std::string_view key, std::size_t count) {
    auto f = next();
    if (f.empty() || f[0] != key || (count && f.size() != count + 1)) {
      throw Error(ErrorCode::kSchema, "model file: expected '" + std::string(key) + "'");
    }
    return f;
  }
  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto f = next();
      if (static_cast<Eigen::Index>(f.size()) != cols) throw Error(ErrorCode::kSchema, "model file: bad row width");
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_double(f[static_cast<std::size_t>(c)]);
    }
    return m;
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string write_model(const RVarModel& m) {
  std::ostringstream os;
  os << "rvar-model 1\n";
  os << "names";
  for (const auto& name : m.names) os << ' ' << name;
  os << "\np " << m.p << "\nspan " << format_date(m.train_begin) << ' ' << format_date(m.train_end) << "\nnobs "
     << m.nobs << '\n';
  const int n = m.n();
  for (int k = 1; k <= m.p; ++k) {
    os << "mask " << k << '\n';
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) os << (j ? " " : "") << (m.mask.zeroed(k, i, j) ? 1 : 0);
      os << '\n';
    }
  }
  for (int k = 1; k <= m.p; ++k) {
    os << "A " << k << '\n';
    write_matrix(os, m.A[static_cast<std::size_t>(k - 1)]);
  }
  os << "c\n";
  write_matrix(os, m.c.transpose());
  os << "sigma_e\n";
  write_matrix(os, m.sigma_e);
  return os.str();
}

RVarModel read_model(std::string_view text) {
  LineReader in(text);
  const auto header = in.next();
  if (header.size() != 2 || header[0] != "rvar-model" || header[1] != "1") {
    throw Error(ErrorCode::kSchema, "not a model file");
  }
  RVarModel m;
  const auto names = in.expect("names", 0);
  for (std::size_t i = 1; i < names.size(); ++i) m.names.emplace_back(names[i]);
  const int n = m.n();
  if (n < 1) throw Error(ErrorCode::kSchema, "model file has no variables");
  m.p = parse_int(in.expect("p", 1)[1]);
  if (m.p < 1 || m.p > kMaxOrder) throw Error(ErrorCode::kSchema, "model order out of range");
  const auto span = in.expect("span", 2);
  m.train_begin = parse_date(span[1]);
  m.train_end = parse_date(span[2]);
  m.nobs = parse_int(in.expect("nobs", 1)[1]);
  m.mask = RestrictionMask(m.p, n);
  for (int k = 1; k <= m.p; ++k) {
    if (parse_int(in.expect("mask", 1)[1]) != k) throw Error(ErrorCode::kSchema, "mask blocks out of order");
    const auto bits = in.matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.mask.set(k, i, j, bits(i, j) != 0.0);
  }
  for (int k = 1; k <= m.p; ++k) {
    if (parse_int(in.expect("A", 1)[1]) != k) throw Error(ErrorCode::kSchema, "A blocks out of order");
    m.A.push_back(in.matrix(n, n));
  }
  in.expect("c", 0);
  m.c = in.matrix(1, n).transpose();
  in.expect("sigma_e", 0);
  m.sigma_e = in.matrix(n, n);
  return m;
}

}  // namespace loadshift::rvar
