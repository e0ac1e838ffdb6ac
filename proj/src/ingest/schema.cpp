#include "loadshift/ingest/schema.hpp"

#include <algorithm>

#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::ingest {

TableKind parse_table_kind(std::string_view text) {
  const auto s = to_lower(trim(text));
  if (s == "load") return TableKind::kLoad;
  if (s == "generation") return TableKind::kGeneration;
  if (s == "price" || s == "lmp") return TableKind::kPrice;
  if (s == "temperature") return TableKind::kTemperature;
  if (s == "humidity") return TableKind::kHumidity;
  if (s == "wind_speed" || s == "wind") return TableKind::kWindSpeed;
  if (s == "other") return TableKind::kOther;
  throw Error(ErrorCode::kSchema, "unknown table kind '" + std::string(text) + "'");
}

std::string_view to_string(TableKind kind) {
  switch (kind) {
    case TableKind::kLoad: return "load";
    case TableKind::kGeneration: return "generation";
    case TableKind::kPrice: return "price";
    case TableKind::kTemperature: return "temperature";
    case TableKind::kHumidity: return "humidity";
    case TableKind::kWindSpeed: return "wind_speed";
    case TableKind::kOther: return "other";
  }
  return "other";
}

TableKind kind_for_field(std::string_view field) {
  if (field == "load") return TableKind::kLoad;
  if (field.starts_with("generation")) return TableKind::kGeneration;
  if (field == "price" || field == "lmp") return TableKind::kPrice;
  if (field == "temperature" || field == "dew_point") return TableKind::kTemperature;
  if (field == "humidity") return TableKind::kHumidity;
  if (field == "wind_speed") return TableKind::kWindSpeed;
  return TableKind::kOther;
}

const std::vector<std::string>& canonical_field_names() {
  static const std::vector<std::string> names{
      "load",          "price",           "lmp",
      "temperature",   "dew_point",       "humidity",
      "wind_speed",    "generation",      "generation_solar",
      "generation_wind", "generation_hydro", "generation_nuclear",
      "generation_gas", "generation_coal", "generation_other",
      "cases",         "deaths",          "stay_home",
      "retail",        "gdp",
  };
  return names;
}

SourceDescriptor SourceDescriptor::from_config(const KeyValueConfig& cfg, std::string_view section) {
  SourceDescriptor d;
  d.name = cfg.get_or(section, "name", std::string(section));
  d.field = cfg.require(section, "field");
  const auto& names = canonical_field_names();
  if (std::find(names.begin(), names.end(), d.field) == names.end()) {
    throw Error(ErrorCode::kSchema, "field '" + d.field + "' is not a canonical field name");
  }
  d.kind = cfg.get(section, "kind") ? parse_table_kind(*cfg.get(section, "kind")) : kind_for_field(d.field);

  const auto delim = cfg.get_or(section, "delimiter", ",");
  if (delim == "tab" || delim == "\\t") d.delimiter = '\t';
  else if (delim.size() == 1) d.delimiter = delim[0];
  else throw Error(ErrorCode::kSchema, "delimiter must be a single character");

  d.date_column = cfg.get_or(section, "date_column", "");
  d.date_format = cfg.get_or(section, "date_format", "%Y-%m-%d");
  d.hour_column = cfg.get_or(section, "hour_column", "");
  d.timestamp_column = cfg.get_or(section, "timestamp_column", "");
  d.value_column = cfg.require(section, "value_column");
  d.location = cfg.get_or(section, "location", "");
  d.location_column = cfg.get_or(section, "location_column", "");

  const auto conv = to_lower(cfg.get_or(section, "hour_convention", "beginning"));
  if (conv == "beginning" || conv == "hour_beginning") d.hour_convention = HourConvention::kBeginning;
  else if (conv == "ending" || conv == "hour_ending") d.hour_convention = HourConvention::kEnding;
  else throw Error(ErrorCode::kSchema, "hour_convention must be 'beginning' or 'ending'");

  d.timezone_offset_hours = static_cast<int>(cfg.get_int(section, "timezone_offset_hours", 0));
  d.unit_factor = cfg.get_double(section, "unit_factor", 1.0);
  d.unit_offset = cfg.get_double(section, "unit_offset", 0.0);
  d.allow_empty = cfg.get_bool(section, "allow_empty", true);

  if (d.timestamp_column.empty() && (d.date_column.empty() || d.hour_column.empty())) {
    throw Error(ErrorCode::kSchema, "descriptor needs timestamp_column or both date_column and hour_column");
  }
  return d;
}

}  // namespace loadshift::ingest
