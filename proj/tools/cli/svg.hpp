#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace loadshift::cli {

struct LineSeries {
  std::string name;
  std::vector<double> values;
};

struct Band {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Static line chart; x positions are the value indices, labelled by
// `x_labels` (thinned to about ten ticks). NaN values break the line.
std::string line_chart(const std::string& title, const std::vector<std::string>& x_labels,
                       const std::vector<LineSeries>& series, const std::optional<Band>& band = std::nullopt);

// One stacked bar per row of `shares`; columns are the stacked parts.
std::string stacked_bar_chart(const std::string& title, const std::vector<std::string>& bar_labels,
                              const std::vector<std::string>& part_names, const Eigen::MatrixXd& shares);

}  // namespace loadshift::cli
