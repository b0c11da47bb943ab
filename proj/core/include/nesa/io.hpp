#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nesa {

std::string read_file(const std::filesystem::path& path);

std::vector<std::string> read_lines(const std::filesystem::path& path);

// Write-temp-then-rename; interrupted runs never leave half-written files.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view bytes);

std::string to_hex(std::uint64_t value);

std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace nesa
