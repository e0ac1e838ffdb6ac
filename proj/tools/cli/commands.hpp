#pragma once

#include <cmath>
#include <string>

#include "cli/context.hpp"

namespace loadshift::cli {

// Subcommand flags. Empty strings and NaN mean "not given"; the commands
// then fall back to their config section.
struct CommandOptions {
  std::string input;
  std::string backup;
  std::string kind;
  std::string model;
  std::string ordering;
  std::string column;
  std::string mode;
  std::string flags;
  std::string meta;
  std::string crop;
  std::string reference;
  std::string load_ensemble;
  int horizon = 0;
  int period = 0;
  double floor = NAN;
  double tolerance = NAN;
};

int cmd_ingest(RunContext& ctx, const CommandOptions& opts);
int cmd_qc_report(RunContext& ctx, const CommandOptions& opts);
int cmd_backcast(RunContext& ctx, const CommandOptions& opts);
int cmd_analyze(RunContext& ctx, const CommandOptions& opts);
int cmd_search(RunContext& ctx, const CommandOptions& opts);
int cmd_irf(RunContext& ctx, const CommandOptions& opts);
int cmd_fevd(RunContext& ctx, const CommandOptions& opts);
int cmd_trend(RunContext& ctx, const CommandOptions& opts);
int cmd_ntl(RunContext& ctx, const CommandOptions& opts);

// Flag value when given, else `[section] key`, else `fallback`.
std::string setting(const RunContext& ctx, const std::string& flag, const std::string& section, const std::string& key,
                    const std::string& fallback = {});

}  // namespace loadshift::cli
