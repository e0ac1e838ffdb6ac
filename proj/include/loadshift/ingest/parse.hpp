#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "loadshift/ingest/schema.hpp"
#include "loadshift/ingest/tables.hpp"

namespace loadshift::ingest {

struct ParseReject {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  LongRecordTable table;
  std::vector<ParseReject> rejects;
};

/// Normalizes one raw source file to canonical long records.
/// Throws kEmptyInput for an empty file and kSchema when the header lacks a
/// column the descriptor names. Malformed rows land in `rejects`.
ParseResult parse_source(std::string_view bytes, const SourceDescriptor& schema);

struct PivotResult {
  WideHourlyTable table;
  QcReport report;  // duplicates_dropped only
};

/// Long -> wide. Keeps the first occurrence of a duplicated (date, hour).
/// Throws kMixedField if more than one field or location is present.
PivotResult pivot_wide(const LongRecordTable& records);

/// Sub-hourly observations -> hourly means. Hours without observations are
/// missing.
WideHourlyTable resample_weather_hourly(const LongRecordTable& minute_records);

}  // namespace loadshift::ingest
