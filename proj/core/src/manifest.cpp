#include "nesa/manifest.hpp"

#include "nesa/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ctime>

namespace nesa {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [path, hash] : input_hashes) inputs[path] = hash;
  j["inputs"] = inputs;
  j["outputs"] = output_paths;
  j["started_at"] = started_at;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["git_describe"] = git_describe;
  return j.dump(2);
}

std::string git_describe_string() {
  FILE* pipe = ::popen("git describe --always --dirty 2>/dev/null", "r");
  if (!pipe) return "";
  char buf[256];
  std::string out;
  while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
  int status = ::pclose(pipe);
  if (status != 0) return "";
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out;
}

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_file_atomic(path, manifest.to_json() + "\n");
}

}  // namespace nesa
