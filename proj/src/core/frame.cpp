#include "loadshift/core/frame.hpp"

#include <set>

#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift {

TimeSeriesFrame::TimeSeriesFrame(std::vector<Date> dates, std::vector<std::string> names,
                                 Eigen::MatrixXd values)
    : dates_(std::move(dates)), names_(std::move(names)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != dates_.size() ||
      static_cast<std::size_t>(values_.cols()) != names_.size()) {
    throw Error(ErrorCode::kSchema, "frame shape does not match dates/names");
  }
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    if (!(dates_[i - 1] < dates_[i])) {
      throw Error(ErrorCode::kSchema, "frame dates must be strictly increasing at " + format_date(dates_[i]));
    }
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw Error(ErrorCode::kSchema, "duplicate column name " + n);
  }
}

bool TimeSeriesFrame::has_column(std::string_view name) const {
  for (const auto& n : names_) {
    if (n == name) return true;
  }
  return false;
}

std::size_t TimeSeriesFrame::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw Error(ErrorCode::kNamedColumn, "unknown column '" + std::string(name) + "'");
}

bool TimeSeriesFrame::has_missing() const { return values_.hasNaN(); }

TimeSeriesFrame TimeSeriesFrame::select(const std::vector<std::string>& names) const {
  Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) out.col(j) = values_.col(index_of(names[j]));
  return {dates_, names, std::move(out)};
}

TimeSeriesFrame TimeSeriesFrame::slice(Date begin, Date end) const {
  std::vector<Date> d;
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < dates_.size(); ++i) {
    if (dates_[i] >= begin && dates_[i] <= end) {
      d.push_back(dates_[i]);
      idx.push_back(static_cast<Eigen::Index>(i));
    }
  }
  return {std::move(d), names_, values_(idx, Eigen::placeholders::all)};
}

TimeSeriesFrame TimeSeriesFrame::tail_from(std::size_t first_row) const {
  if (first_row > rows()) first_row = rows();
  const auto n = static_cast<Eigen::Index>(rows() - first_row);
  return {std::vector<Date>(dates_.begin() + static_cast<std::ptrdiff_t>(first_row), dates_.end()), names_,
          values_.bottomRows(n)};
}

TimeSeriesFrame TimeSeriesFrame::with_column(std::string name, const Eigen::VectorXd& values) const {
  if (static_cast<std::size_t>(values.size()) != rows()) {
    throw Error(ErrorCode::kSchema, "column length mismatch for " + name);
  }
  auto names = names_;
  names.push_back(std::move(name));
  Eigen::MatrixXd out(values_.rows(), values_.cols() + 1);
  out << values_, values;
  return {dates_, std::move(names), std::move(out)};
}

std::string write_frame_csv(const TimeSeriesFrame& frame) {
  std::string out = "date";
  for (const auto& n : frame.names()) out += "," + csv_escape(n);
  out += '\n';
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    out += format_date(frame.dates()[i]);
    for (std::size_t j = 0; j < frame.cols(); ++j) {
      out += ',';
      const double v = frame.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!is_missing(v)) out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

TimeSeriesFrame read_frame_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "frame CSV is empty");
  const auto& header = rows.front().fields;
  if (header.empty() || trim(header[0]) != "date") {
    throw Error(ErrorCode::kSchema, "frame CSV must start with a 'date' column");
  }
  std::vector<std::string> names;
  for (std::size_t j = 1; j < header.size(); ++j) names.emplace_back(trim(header[j]));
  std::vector<Date> dates;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kSchema, "line " + std::to_string(rows[i].line) + ": expected " +
                                          std::to_string(header.size()) + " fields");
    }
    dates.push_back(parse_date(trim(f[0])));
    for (std::size_t j = 1; j < f.size(); ++j) {
      const auto cell = trim(f[j]);
      values(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) =
          cell.empty() ? kMissing : parse_double(cell);
    }
  }
  return {std::move(dates), std::move(names), std::move(values)};
}

}  // namespace loadshift
