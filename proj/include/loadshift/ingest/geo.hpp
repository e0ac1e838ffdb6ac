#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loadshift/core/frame.hpp"

namespace loadshift::ingest {

struct RegionMap {
  std::map<std::string, std::string> county_to_region;
  // Known target regions. Empty means "whatever the map names".
  std::vector<std::string> regions;

  // Two-column CSV "county,region" with a header row. A county listed twice
  // is a mapping error.
  static RegionMap from_csv(std::string_view text);
};

struct GeoAggregation {
  std::map<std::string, TimeSeriesFrame> regions;
  std::vector<std::string> warnings;
};

/// Sums county series into their regions date by date. Counties absent from
/// the map are skipped with a warning; a county lacking a date contributes 0
/// for it, also with a warning. A county mapped to a region outside
/// `map.regions` is a mapping error.
GeoAggregation aggregate_geo(const std::vector<std::pair<std::string, TimeSeriesFrame>>& county_frames,
                             const RegionMap& map);

// Long CSV "date,county,value" -> one single-column frame per county.
std::vector<std::pair<std::string, TimeSeriesFrame>> read_county_series_csv(std::string_view text,
                                                                            const std::string& column);

}  // namespace loadshift::ingest
