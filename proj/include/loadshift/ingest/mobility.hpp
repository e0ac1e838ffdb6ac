#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loadshift/core/frame.hpp"

namespace loadshift::ingest {

// County-level device panel for one day: total devices C, completely
// stay-at-home C1, median home dwell minutes C2, part-time on-site C3,
// full-time on-site C4.
struct DeviceCounts {
  Date date;
  std::string county;
  double total = 0;
  double stay_home = 0;
  double dwell_minutes = 0;
  double parttime = 0;
  double fulltime = 0;
};

struct MobilityMetrics {
  Date date;
  std::string county;
  double stay_home_rate = 0;   // C1 / C
  double home_dwell_rate = 0;  // C2 / 1440
  double parttime_rate = 0;    // C3 / C
  double fulltime_rate = 0;    // C4 / C
  double retail_visits = 0;
};

struct RowError {
  std::size_t index = 0;
  std::string message;
};

struct MobilityResult {
  std::vector<MobilityMetrics> rows;
  std::vector<RowError> errors;  // rows that violated C > 0 or the count bounds
};

MobilityResult mobility_metrics(std::span<const DeviceCounts> counts);

struct PoiVisits {
  Date date;
  std::string county;
  std::string category;
  double visits = 0;
};

// The 25 POI categories counted as retail mobility.
const std::array<std::string_view, 25>& retail_categories();
bool is_retail_category(std::string_view category);

/// Daily retail visits per county, summed over the retail categories only.
/// Every (county, date) seen in the input gets a row, 0 if none of its rows
/// are retail. Output frames have a single column "retail".
std::map<std::string, TimeSeriesFrame> retail_visits(std::span<const PoiVisits> rows);

std::vector<DeviceCounts> read_device_counts_csv(std::string_view text);
std::vector<PoiVisits> read_poi_csv(std::string_view text);

}  // namespace loadshift::ingest
