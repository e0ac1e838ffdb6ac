#include "loadshift/ingest/mobility.hpp"

#include <algorithm>
#include <cctype>

#include "loadshift/util/csv.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::ingest {

MobilityResult mobility_metrics(std::span<const DeviceCounts> counts) {
  MobilityResult out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& c = counts[i];
    if (!(c.total > 0)) {
      out.errors.push_back({i, "zero-panel error: C = 0 for " + c.county + " on " + format_date(c.date)});
      continue;
    }
    if (c.stay_home < 0 || c.parttime < 0 || c.fulltime < 0 || c.stay_home > c.total || c.parttime > c.total ||
        c.fulltime > c.total) {
      out.errors.push_back({i, "device counts outside [0, C] for " + c.county + " on " + format_date(c.date)});
      continue;
    }
    if (c.dwell_minutes < 0 || c.dwell_minutes > 1440) {
      out.errors.push_back({i, "home dwell minutes outside [0, 1440] for " + c.county});
      continue;
    }
    out.rows.push_back({c.date, c.county, c.stay_home / c.total, c.dwell_minutes / 1440.0, c.parttime / c.total,
                        c.fulltime / c.total, 0.0});
  }
  return out;
}

const std::array<std::string_view, 25>& retail_categories() {
  static constexpr std::array<std::string_view, 25> kCategories{
      "Automobile Dealers",
      "Automotive Parts, Accessories, and Tire Stores",
      "Beer, Wine, and Liquor Stores",
      "Book Stores and News Dealers",
      "Clothing Stores",
      "Department Stores",
      "Drinking Places (Alcoholic Beverages)",
      "Electronics and Appliance Stores",
      "Florists",
      "Furniture Stores",
      "Gasoline Stations",
      "General Merchandise Stores, including Warehouse Clubs and Super-centers",
      "Grocery Stores",
      "Health and Personal Care Stores",
      "Home Furnishings Stores",
      "Jewelry, Luggage, and Leather Goods Stores",
      "Lawn and Garden Equipment and Supplies Stores",
      "Office Supplies, Stationery, and Gift Stores",
      "Other Miscellaneous Store Retailers",
      "Other Motor Vehicle Dealers",
      "Restaurants and Other Eating Places",
      "Shoe Stores",
      "Specialty Food Stores",
      "Sporting Goods, Hobby, and Musical Instrument Stores",
      "Used Merchandise Stores",
  };
  return kCategories;
}

namespace {

// Lowercase alphanumerics only, so punctuation and spacing variants
// compare equal.
std::string normalize_category(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace

bool is_retail_category(std::string_view category) {
  const auto key = normalize_category(category);
  return std::any_of(retail_categories().begin(), retail_categories().end(),
                     [&](std::string_view c) { return normalize_category(c) == key; });
}

std::map<std::string, TimeSeriesFrame> retail_visits(std::span<const PoiVisits> rows) {
  std::map<std::string, std::map<Date, double>> sums;
  for (const auto& r : rows) {
    double& slot = sums[r.county][r.date];
    if (is_retail_category(r.category)) slot += r.visits;
  }
  std::map<std::string, TimeSeriesFrame> out;
  for (const auto& [county, series] : sums) {
    std::vector<Date> dates;
    Eigen::MatrixXd v(static_cast<Eigen::Index>(series.size()), 1);
    Eigen::Index i = 0;
    for (const auto& [d, x] : series) {
      dates.push_back(d);
      v(i++, 0) = x;
    }
    out.emplace(county, TimeSeriesFrame(std::move(dates), {"retail"}, std::move(v)));
  }
  return out;
}

std::vector<DeviceCounts> read_device_counts_csv(std::string_view text) {
  std::vector<DeviceCounts> out;
  const auto rows = parse_csv(text);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != 7) throw Error(ErrorCode::kSchema, "device counts line " + std::to_string(rows[i].line));
    out.push_back({parse_date(trim(f[0])), std::string(trim(f[1])), parse_double(f[2]), parse_double(f[3]),
                   parse_double(f[4]), parse_double(f[5]), parse_double(f[6])});
  }
  return out;
}

std::vector<PoiVisits> read_poi_csv(std::string_view text) {
  std::vector<PoiVisits> out;
  const auto rows = parse_csv(text);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != 4) throw Error(ErrorCode::kSchema, "poi line " + std::to_string(rows[i].line));
    out.push_back({parse_date(trim(f[0])), std::string(trim(f[1])), std::string(trim(f[2])), parse_double(f[3])});
  }
  return out;
}

}  // namespace loadshift::ingest
