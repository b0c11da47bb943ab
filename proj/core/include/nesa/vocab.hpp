#pragma once

#include "nesa/record.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nesa {

// Closed vocabulary; line number = id in the one-token-per-line file format.
// The four specials always occupy ids 0..3 in this order.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kMask = 2;
  static constexpr int kSentiment = 3;
  static constexpr int kNumSpecials = 4;

  static const char* special_token(int id);

  Vocabulary();

  // Builds from the tokenized sentences of a corpus; regular tokens are
  // sorted lexicographically for determinism.
  static Vocabulary build(const std::vector<Record>& records);
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  int id(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }

  std::string to_text() const;  // one token per line
  static Vocabulary from_text(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  std::uint64_t hash() const;  // FNV-1a over the text form

 private:
  void push(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace nesa
