#include "nesa/record.hpp"

#include "nesa/errors.hpp"
#include "nesa/io.hpp"
#include "nesa/utf8.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace nesa {

const char* to_string(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::positive: return "positive";
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::neutral: return "neutral";
  }
  fail(ErrorKind::contract, "invalid SentimentLabel value");
}

SentimentLabel label_from_string(const std::string& name) {
  if (name == "positive") return SentimentLabel::positive;
  if (name == "negative") return SentimentLabel::negative;
  if (name == "neutral") return SentimentLabel::neutral;
  fail(ErrorKind::parse, "unknown sentiment label: '" + name + "'");
}

namespace {

std::string at_line(std::size_t line_number) {
  return line_number == 0 ? std::string() : " (line " + std::to_string(line_number) + ")";
}

}  // namespace

Record parse_record(std::string_view line, std::size_t line_number) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, "malformed JSON" + at_line(line_number) + ": " + e.what());
  }
  require(j.is_object(), ErrorKind::parse, "record is not a JSON object" + at_line(line_number));

  Record rec;
  try {
    rec.id = j.at("id").get<std::string>();
    rec.sentence = j.at("sentence").get<std::string>();
    const auto& span = j.at("entity_char_span");
    require(span.is_array() && span.size() == 2, ErrorKind::parse,
            "entity_char_span must be a [start, end] pair" + at_line(line_number));
    long long start = span[0].get<long long>();
    long long end = span[1].get<long long>();
    require(start >= 0 && end >= 0, ErrorKind::validation,
            "record '" + rec.id + "': negative span offset");
    rec.entity_span = CharSpan{static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
    rec.entity_text = j.at("entity_text").get<std::string>();
    if (j.contains("label") && !j.at("label").is_null()) {
      rec.label = label_from_string(j.at("label").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, "missing or mistyped field" + at_line(line_number) + ": " + e.what());
  }

  std::u32string sentence = utf8_decode(rec.sentence);
  require(rec.entity_span.begin < rec.entity_span.end, ErrorKind::validation,
          "record '" + rec.id + "': empty entity span");
  require(rec.entity_span.end <= sentence.size(), ErrorKind::validation,
          "record '" + rec.id + "': span end " + std::to_string(rec.entity_span.end) +
              " exceeds sentence length " + std::to_string(sentence.size()));
  std::u32string covered =
      sentence.substr(rec.entity_span.begin, rec.entity_span.end - rec.entity_span.begin);
  require(utf8_encode(covered) == rec.entity_text, ErrorKind::validation,
          "record '" + rec.id + "': entity_text does not match sentence span");
  return rec;
}

std::string serialize_record(const Record& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["sentence"] = record.sentence;
  j["entity_char_span"] = {record.entity_span.begin, record.entity_span.end};
  j["entity_text"] = record.entity_text;
  if (record.label) j["label"] = to_string(*record.label);
  return j.dump();
}

std::vector<Record> read_records(const std::filesystem::path& path) {
  std::vector<Record> records;
  std::size_t line_number = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_number;
    if (line.empty()) continue;
    records.push_back(parse_record(line, line_number));
  }
  return records;
}

void write_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  std::ostringstream out;
  for (const Record& rec : records) out << serialize_record(rec) << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace nesa
