#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "loadshift/core/date.hpp"

namespace loadshift {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

/// Date-indexed multivariate daily series. Missing cells are NaN.
///
/// Invariants (checked on construction): dates strictly increasing, names
/// unique, values is dates.size() x names.size().
class TimeSeriesFrame {
 public:
  TimeSeriesFrame() = default;
  TimeSeriesFrame(std::vector<Date> dates, std::vector<std::string> names, Eigen::MatrixXd values);

  std::size_t rows() const { return dates_.size(); }
  std::size_t cols() const { return names_.size(); }
  bool empty() const { return dates_.empty(); }

  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<std::string>& names() const { return names_; }
  const Eigen::MatrixXd& values() const { return values_; }

  bool has_column(std::string_view name) const;
  // Throws ErrorCode::kNamedColumn for unknown names.
  std::size_t index_of(std::string_view name) const;
  Eigen::VectorXd column(std::string_view name) const { return values_.col(index_of(name)); }
  auto col(std::size_t i) const { return values_.col(static_cast<Eigen::Index>(i)); }

  bool has_missing() const;

  TimeSeriesFrame select(const std::vector<std::string>& names) const;
  // Rows with begin <= date <= end.
  TimeSeriesFrame slice(Date begin, Date end) const;
  TimeSeriesFrame tail_from(std::size_t first_row) const;
  TimeSeriesFrame with_column(std::string name, const Eigen::VectorXd& values) const;

 private:
  std::vector<Date> dates_;
  std::vector<std::string> names_;
  Eigen::MatrixXd values_;
};

// CSV with header "date,<name>,..."; empty cell = missing.
std::string write_frame_csv(const TimeSeriesFrame& frame);
TimeSeriesFrame read_frame_csv(std::string_view text);

}  // namespace loadshift
