#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nesa {

// One manifest per CLI run: what ran, on which inputs, producing which
// outputs. Timestamps are informational and excluded from idempotence.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> input_hashes;  // path -> hex hash
  std::vector<std::string> output_paths;
  std::string started_at;  // ISO-8601, UTC
  double wall_clock_seconds = 0.0;
  std::string git_describe;  // empty when unavailable

  std::string to_json() const;
};

// Captures `git describe --always --dirty`; empty string when git or the
// repository is unavailable.
std::string git_describe_string();

std::string iso8601_utc_now();

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace nesa
