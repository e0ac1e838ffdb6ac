#include "loadshift/core/transforms.hpp"

#include <map>

#include "loadshift/util/error.hpp"

namespace loadshift {

namespace {

void require_complete(const TimeSeriesFrame& frame, const char* op) {
  if (frame.has_missing()) {
    throw Error(ErrorCode::kPrecondition, std::string(op) + ": input contains missing values; run QC first");
  }
}

}  // namespace

TimeSeriesFrame log_transform(const TimeSeriesFrame& frame, const std::vector<std::string>& columns,
                              bool drop_nonpositive) {
  require_complete(frame, "log_transform");
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(frame.index_of(c));

  Eigen::MatrixXd values = frame.values();
  std::vector<Eigen::Index> keep;
  std::vector<Date> dates;
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    bool drop = false;
    for (auto j : idx) {
      double& v = values(r, static_cast<Eigen::Index>(j));
      if (v > 0.0) {
        v = std::log(v);
      } else if (drop_nonpositive) {
        drop = true;
      } else {
        v = kMissing;
      }
    }
    if (!drop) {
      keep.push_back(r);
      dates.push_back(frame.dates()[static_cast<std::size_t>(r)]);
    }
  }
  return {std::move(dates), frame.names(), values(keep, Eigen::placeholders::all)};
}

TimeSeriesFrame difference(const TimeSeriesFrame& frame, int order) {
  if (order < 1) throw Error(ErrorCode::kParameter, "difference order must be positive");
  if (frame.rows() <= static_cast<std::size_t>(order)) {
    throw Error(ErrorCode::kInsufficientData, "difference of order " + std::to_string(order) + " needs more than " +
                                                  std::to_string(order) + " rows");
  }
  require_complete(frame, "difference");
  Eigen::MatrixXd v = frame.values();
  for (int k = 0; k < order; ++k) {
    const auto n = v.rows() - 1;
    v = (v.bottomRows(n) - v.topRows(n)).eval();
  }
  return {std::vector<Date>(frame.dates().begin() + order, frame.dates().end()), frame.names(), std::move(v)};
}

TimeSeriesFrame undifference(const TimeSeriesFrame& differenced, const TimeSeriesFrame& head) {
  const auto order = static_cast<Eigen::Index>(head.rows());
  if (order < 1) throw Error(ErrorCode::kParameter, "undifference needs at least one head row");
  if (head.names() != differenced.names()) throw Error(ErrorCode::kSchema, "undifference: column mismatch");

  // initial[j] = first value of the j-th order difference of the levels.
  std::vector<Eigen::RowVectorXd> initial;
  Eigen::MatrixXd h = head.values();
  for (Eigen::Index j = 0; j < order; ++j) {
    initial.push_back(h.row(0));
    const auto n = h.rows() - 1;
    if (n > 0) h = (h.bottomRows(n) - h.topRows(n)).eval();
  }
  Eigen::MatrixXd level = differenced.values();
  for (Eigen::Index j = order - 1; j >= 0; --j) {
    Eigen::MatrixXd up(level.rows() + 1, level.cols());
    up.row(0) = initial[static_cast<std::size_t>(j)];
    for (Eigen::Index t = 0; t < level.rows(); ++t) up.row(t + 1) = up.row(t) + level.row(t);
    level = std::move(up);
  }
  std::vector<Date> dates(head.dates());
  dates.insert(dates.end(), differenced.dates().begin(), differenced.dates().end());
  return {std::move(dates), differenced.names(), std::move(level)};
}

TimeSeriesFrame weekly_moving_average(const TimeSeriesFrame& frame, const std::vector<std::string>& columns) {
  if (frame.rows() < 7) throw Error(ErrorCode::kInsufficientData, "weekly moving average needs at least 7 rows");
  require_complete(frame, "weekly_moving_average");
  Eigen::MatrixXd values = frame.values();
  for (const auto& c : columns) {
    const auto j = static_cast<Eigen::Index>(frame.index_of(c));
    const Eigen::VectorXd src = frame.values().col(j);
    for (Eigen::Index t = 0; t < src.size(); ++t) {
      const Eigen::Index start = std::max<Eigen::Index>(0, t - 6);
      values(t, j) = src.segment(start, t - start + 1).mean();
    }
  }
  return {frame.dates(), frame.names(), std::move(values)};
}

DayOfWeekAlignment align_day_of_week(const TimeSeriesFrame& current, const TimeSeriesFrame& reference) {
  // (iso week, weekday) -> reference rows with their ISO year.
  std::map<std::pair<unsigned, unsigned>, std::vector<std::pair<int, std::size_t>>> by_week;
  for (std::size_t i = 0; i < reference.rows(); ++i) {
    const auto wk = iso_week(reference.dates()[i]);
    by_week[{wk.week, wk.weekday}].emplace_back(wk.year, i);
  }

  std::vector<Eigen::Index> ref_cols;
  for (const auto& n : current.names()) ref_cols.push_back(static_cast<Eigen::Index>(reference.index_of(n)));

  DayOfWeekAlignment out;
  out.names = current.names();
  std::vector<Eigen::Index> cur_rows, ref_rows;
  for (std::size_t i = 0; i < current.rows(); ++i) {
    const Date d = current.dates()[i];
    const auto wk = iso_week(d);
    const auto it = by_week.find({wk.week, wk.weekday});
    if (it == by_week.end()) {
      out.unpaired.push_back(d);
      continue;
    }
    // Prefer the ISO year right before the current one; ties go to the earlier year.
    const int wanted = wk.year - 1;
    const auto* best = &it->second.front();
    for (const auto& cand : it->second) {
      const int dc = std::abs(cand.first - wanted);
      const int db = std::abs(best->first - wanted);
      if (dc < db || (dc == db && cand.first < best->first)) best = &cand;
    }
    out.current_dates.push_back(d);
    out.reference_dates.push_back(reference.dates()[best->second]);
    cur_rows.push_back(static_cast<Eigen::Index>(i));
    ref_rows.push_back(static_cast<Eigen::Index>(best->second));
  }
  if (cur_rows.empty()) throw Error(ErrorCode::kNoAlignment, "no current date has a same-week, same-weekday reference");
  out.current = current.values()(cur_rows, Eigen::placeholders::all);
  out.reference = reference.values()(ref_rows, ref_cols);
  return out;
}

}  // namespace loadshift
