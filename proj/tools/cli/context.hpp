#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loadshift/util/config.hpp"

namespace loadshift::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitUnresolved = 2, kExitNoModel = 3 };

/// Per-invocation state shared by the subcommands: resolved settings, the
/// inputs read (with digests) and the outputs written.
class RunContext {
 public:
  std::string command;
  std::filesystem::path config_path;
  KeyValueConfig config;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path out_dir;
  std::ostream* log = nullptr;

  // Relative paths resolve against the config file's directory.
  std::filesystem::path resolve(const std::string& path) const;
  // kIo naming the path when it cannot be read.
  std::string read_input(const std::filesystem::path& path);
  void write_output(const std::string& name, std::string_view content);

  const std::vector<std::pair<std::string, std::string>>& inputs() const { return inputs_; }
  const std::vector<std::pair<std::string, std::string>>& outputs() const { return outputs_; }

  // manifest.json: command, config, seed, jobs, version, exit code, wall
  // time, and every input and output with its SHA-256.
  void write_manifest(int exit_code, double wall_seconds) const;

 private:
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

}  // namespace loadshift::cli
