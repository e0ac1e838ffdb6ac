#include "loadshift/ingest/geo.hpp"

#include <algorithm>
#include <set>

#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::ingest {

RegionMap RegionMap::from_csv(std::string_view text) {
  RegionMap m;
  const auto rows = parse_csv(text);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() < 2) throw Error(ErrorCode::kMapping, "region map line " + std::to_string(rows[i].line));
    const std::string county(trim(f[0]));
    const std::string region(trim(f[1]));
    if (!m.county_to_region.emplace(county, region).second) {
      throw Error(ErrorCode::kMapping, "county " + county + " appears more than once in the region map");
    }
  }
  return m;
}

GeoAggregation aggregate_geo(const std::vector<std::pair<std::string, TimeSeriesFrame>>& county_frames,
                             const RegionMap& map) {
  std::set<std::string> known(map.regions.begin(), map.regions.end());
  if (known.empty()) {
    for (const auto& [county, region] : map.county_to_region) known.insert(region);
  }

  GeoAggregation out;
  std::map<std::string, std::vector<const std::pair<std::string, TimeSeriesFrame>*>> members;
  std::vector<std::string> names;
  for (const auto& entry : county_frames) {
    const auto it = map.county_to_region.find(entry.first);
    if (it == map.county_to_region.end()) {
      out.warnings.push_back("county " + entry.first + " is not in the region map; excluded");
      continue;
    }
    if (!known.count(it->second)) {
      throw Error(ErrorCode::kMapping, "county " + entry.first + " maps to unknown region " + it->second);
    }
    if (names.empty()) names = entry.second.names();
    if (entry.second.names() != names) {
      throw Error(ErrorCode::kSchema, "county " + entry.first + " has different columns");
    }
    members[it->second].push_back(&entry);
  }

  for (const auto& [region, list] : members) {
    std::set<Date> all;
    for (const auto* m : list) all.insert(m->second.dates().begin(), m->second.dates().end());
    const std::vector<Date> dates(all.begin(), all.end());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dates.size()),
                                                static_cast<Eigen::Index>(names.size()));
    for (const auto* m : list) {
      const auto& f = m->second;
      std::size_t r = 0;
      for (std::size_t i = 0; i < dates.size(); ++i) {
        if (r < f.rows() && f.dates()[r] == dates[i]) {
          for (Eigen::Index j = 0; j < sum.cols(); ++j) {
            const double v = f.values()(static_cast<Eigen::Index>(r), j);
            if (is_missing(v)) {
              out.warnings.push_back("county " + m->first + " missing value on " + format_date(dates[i]) +
                                     "; counted as 0");
            } else {
              sum(static_cast<Eigen::Index>(i), j) += v;
            }
          }
          ++r;
        } else {
          out.warnings.push_back("county " + m->first + " has no row for " + format_date(dates[i]) +
                                 "; counted as 0");
        }
      }
    }
    out.regions.emplace(region, TimeSeriesFrame(dates, names, std::move(sum)));
  }
  return out;
}

std::vector<std::pair<std::string, TimeSeriesFrame>> read_county_series_csv(std::string_view text,
                                                                            const std::string& column) {
  const auto rows = parse_csv(text);
  std::map<std::string, std::map<Date, double>> by_county;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != 3) throw Error(ErrorCode::kSchema, "county series line " + std::to_string(rows[i].line));
    by_county[std::string(trim(f[1]))][parse_date(trim(f[0]))] = parse_double(f[2]);
  }
  std::vector<std::pair<std::string, TimeSeriesFrame>> out;
  for (const auto& [county, series] : by_county) {
    std::vector<Date> dates;
    Eigen::MatrixXd v(static_cast<Eigen::Index>(series.size()), 1);
    Eigen::Index r = 0;
    for (const auto& [d, x] : series) {
      dates.push_back(d);
      v(r++, 0) = x;
    }
    out.emplace_back(county, TimeSeriesFrame(std::move(dates), {column}, std::move(v)));
  }
  return out;
}

}  // namespace loadshift::ingest
