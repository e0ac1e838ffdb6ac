#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "loadshift/util/config.hpp"

namespace loadshift::ingest {

enum class TableKind { kLoad, kGeneration, kPrice, kTemperature, kHumidity, kWindSpeed, kOther };

TableKind parse_table_kind(std::string_view text);
std::string_view to_string(TableKind kind);
// Canonical field name -> table kind (unknown names map to kOther).
TableKind kind_for_field(std::string_view field);

enum class HourConvention { kBeginning, kEnding };

// Standard field names every parsed source is translated to.
const std::vector<std::string>& canonical_field_names();

/// Describes one source family: where the columns are, how its hours are
/// labelled, the fixed UTC offset to apply and the unit conversion
/// (canonical = raw * unit_factor + unit_offset).
struct SourceDescriptor {
  std::string name;
  std::string field;
  TableKind kind = TableKind::kOther;
  char delimiter = ',';

  std::string date_column;
  std::string date_format = "%Y-%m-%d";
  std::string hour_column;       // integer hour or "HH:MM"
  std::string timestamp_column;  // "YYYY-MM-DD HH:MM[:SS]"; replaces date/hour columns
  std::string value_column;
  std::string location;
  std::string location_column;

  HourConvention hour_convention = HourConvention::kBeginning;
  int timezone_offset_hours = 0;
  double unit_factor = 1.0;
  double unit_offset = 0.0;
  bool allow_empty = true;

  static SourceDescriptor from_config(const KeyValueConfig& cfg, std::string_view section = "");
};

}  // namespace loadshift::ingest
