#include "cli/context.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "loadshift/util/digest.hpp"
#include "loadshift/util/error.hpp"

namespace loadshift::cli {

namespace fs = std::filesystem;

fs::path RunContext::resolve(const std::string& path) const {
  fs::path p(path);
  if (p.is_absolute() || config_path.empty()) return p;
  return config_path.parent_path() / p;
}

std::string RunContext::read_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "missing input file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  inputs_.emplace_back(path.string(), sha256_hex(bytes));
  return bytes;
}

void RunContext::write_output(const std::string& name, std::string_view content) {
  const auto path = out_dir / name;
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  outputs_.emplace_back(name, sha256_hex(content));
  if (log) *log << "wrote " << path.string() << '\n';
}

void RunContext::write_manifest(int exit_code, double wall_seconds) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config_path.string();
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["tool_version"] = std::string(kVersion);
  j["exit_code"] = exit_code;
  j["wall_time_seconds"] = wall_seconds;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : inputs_) j["inputs"].push_back({{"path", path}, {"sha256", digest}});
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : outputs_) j["outputs"].push_back({{"path", path}, {"sha256", digest}});
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "manifest.json", std::ios::trunc);
  out << j.dump(2) << '\n';
}

}  // namespace loadshift::cli
