#include "loadshift/ingest/qc.hpp"

#include <cmath>
#include <limits>

namespace loadshift::ingest {

bool outlier_rule_applies(TableKind kind) {
  return kind != TableKind::kPrice && kind != TableKind::kTemperature;
}

QcResult qc_outliers(const WideHourlyTable& table, const QcOutlierRule& rule) {
  QcResult out{table, {}};
  auto& values = out.table.values;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    const Date date = table.dates[static_cast<std::size_t>(i)];
    const auto present = (!values.row(i).array().isNaN()).count();
    if (present == 0) {
      for (int h = 0; h < 24; ++h) out.report.unresolved.push_back({date, h});
      continue;
    }
    if (!outlier_rule_applies(table.kind) || present < rule.min_present) continue;

    // Repeat against the surviving cells so a second QC pass finds nothing.
    bool flagged = true;
    while (flagged) {
      flagged = false;
      const auto kept = values.row(i).array().isNaN();
      const auto n = (!kept).count();
      if (n < rule.min_present) break;
      const double mean = kept.select(0.0, values.row(i).array()).sum() / static_cast<double>(n);
      if (!(mean > 0.0)) break;
      for (int h = 0; h < 24; ++h) {
        const double v = values(i, h);
        if (std::isnan(v)) continue;
        if (v > rule.upper_ratio * mean || v < rule.lower_ratio * mean) {
          out.report.outliers.push_back({date, h, v, v > mean ? "above_5x_daily_mean" : "below_20pct_daily_mean"});
          values(i, h) = std::numeric_limits<double>::quiet_NaN();
          flagged = true;
        }
      }
    }
  }
  return out;
}

QcResult qc_fill_missing(const WideHourlyTable& table, const WideHourlyTable* backup) {
  QcResult out{table, {}};
  auto& values = out.table.values;
  const Eigen::Index rows = values.rows();

  // Flattened hourly timeline; a new segment starts whenever dates skip a day.
  const Eigen::Index total = rows * 24;
  auto cell = [&](Eigen::Index k) -> double& { return values(k / 24, static_cast<int>(k % 24)); };
  auto joined = [&](Eigen::Index a, Eigen::Index b) {  // b = a + 1
    const auto ra = a / 24, rb = b / 24;
    if (ra == rb) return true;
    return table.dates[static_cast<std::size_t>(rb)] - table.dates[static_cast<std::size_t>(ra)] ==
           std::chrono::days{1};
  };

  Eigen::Index k = 0;
  while (k < total) {
    if (!std::isnan(cell(k))) {
      ++k;
      continue;
    }
    Eigen::Index end = k;
    while (end + 1 < total && std::isnan(cell(end + 1)) && joined(end, end + 1)) ++end;

    const bool isolated = end == k && k > 0 && k + 1 < total && joined(k - 1, k) && joined(k, k + 1) &&
                          !std::isnan(cell(k - 1)) && !std::isnan(cell(k + 1));
    if (isolated) {
      const double v = 0.5 * (cell(k - 1) + cell(k + 1));
      cell(k) = v;
      out.report.gaps_filled.push_back({table.dates[static_cast<std::size_t>(k / 24)], static_cast<int>(k % 24), v,
                                        "interpolated"});
    } else {
      for (Eigen::Index j = k; j <= end; ++j) {
        const Date date = table.dates[static_cast<std::size_t>(j / 24)];
        const int hour = static_cast<int>(j % 24);
        const Eigen::Index b = backup ? backup->find(date) : -1;
        if (b >= 0 && !std::isnan(backup->values(b, hour))) {
          cell(j) = backup->values(b, hour);
          out.report.gaps_filled.push_back({date, hour, cell(j), "backup"});
        } else {
          out.report.unresolved.push_back({date, hour});
        }
      }
    }
    k = end + 1;
  }
  return out;
}

}  // namespace loadshift::ingest
