#pragma once

#include "nesa/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nesa {

// One labeled example. Immutable after parse; fold assignment and caching
// key off the id.
struct Record {
  std::string id;
  std::string sentence;  // UTF-8
  CharSpan entity_span;  // code point offsets, half-open
  std::string entity_text;
  std::optional<SentimentLabel> label;
};

// Parses one newline-delimited JSON object. line_number is used in error
// messages only (1-based; 0 means unknown).
Record parse_record(std::string_view line, std::size_t line_number = 0);

// Canonical single-line JSON form: id, sentence, entity_char_span,
// entity_text, label (omitted when absent), in that key order.
std::string serialize_record(const Record& record);

std::vector<Record> read_records(const std::filesystem::path& path);

void write_records(const std::filesystem::path& path, const std::vector<Record>& records);

}  // namespace nesa
