#include "nesa/errors.hpp"
#include "nesa/folds.hpp"
#include "nesa/record.hpp"

#include "support/oracles.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace nesa;

TEST_CASE("parse_record maps fields directly") {
  Record rec = parse_record(
      R"({"id":"a","sentence":"Bank failed today","entity_char_span":[0,4],"entity_text":"Bank","label":"negative"})");
  CHECK(rec.id == "a");
  CHECK(rec.sentence == "Bank failed today");
  CHECK(rec.entity_span == CharSpan{0, 4});
  CHECK(rec.entity_text == "Bank");
  CHECK(*rec.label == SentimentLabel::negative);
}

TEST_CASE("parse_record rejects out-of-bounds spans") {
  CHECK(oracles::throws_with(
      [] {
        parse_record(
            R"({"id":"b","sentence":"ok","entity_char_span":[0,5],"entity_text":"ok","label":"neutral"})");
      },
      ErrorKind::validation, "exceeds sentence length"));
}

TEST_CASE("parse_record rejects entity text mismatches") {
  try {
    parse_record(
        R"({"id":"c","sentence":"X met Y","entity_char_span":[6,7],"entity_text":"Z","label":"positive"})");
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("'c'") != std::string::npos);
  }
}

TEST_CASE("parse_record flags malformed JSON with the line number") {
  try {
    parse_record("{not json", 17);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("line 17") != std::string::npos);
  }
}

TEST_CASE("character spans count code points, not bytes") {
  // Cyrillic: 2 bytes per letter, so byte offsets would be far off.
  Record rec = parse_record(
      R"({"id":"ru","sentence":"Суд осудил Банк","entity_char_span":[11,15],"entity_text":"Банк"})");
  CHECK(rec.entity_span == CharSpan{11, 15});
  CHECK_FALSE(rec.label.has_value());
}

TEST_CASE("unknown fields are ignored") {
  Record rec = parse_record(
      R"({"id":"x","sentence":"ab cd","entity_char_span":[0,2],"entity_text":"ab","extra":1})");
  CHECK(rec.id == "x");
}

TEST_CASE("round-trip: serialize(parse(x)) is canonical") {
  const std::string canonical =
      R"({"id":"a","sentence":"Bank failed today","entity_char_span":[0,4],"entity_text":"Bank","label":"negative"})";
  CHECK(serialize_record(parse_record(canonical)) == canonical);

  // Property over generated records: parse(serialize(r)) == r, and a second
  // serialize is byte-identical.
  synthetic::CueCorpusOptions options;
  options.count = 60;
  options.seed = 9;
  for (const Record& rec : synthetic::cue_corpus(options)) {
    std::string once = serialize_record(rec);
    Record back = parse_record(once);
    CHECK(back.id == rec.id);
    CHECK(back.sentence == rec.sentence);
    CHECK(back.entity_span == rec.entity_span);
    CHECK(serialize_record(back) == once);
  }
}

TEST_CASE("split_folds stratifies 4/4/2 into two balanced folds") {
  std::vector<Record> records;
  auto add = [&records](const std::string& id, SentimentLabel label) {
    Record rec;
    rec.id = id;
    rec.sentence = "w x";
    rec.entity_span = {0, 1};
    rec.entity_text = "w";
    rec.label = label;
    records.push_back(rec);
  };
  for (int i = 0; i < 4; ++i) add("p" + std::to_string(i), SentimentLabel::positive);
  for (int i = 0; i < 4; ++i) add("n" + std::to_string(i), SentimentLabel::negative);
  for (int i = 0; i < 2; ++i) add("u" + std::to_string(i), SentimentLabel::neutral);

  FoldAssignment fa = split_folds(records, 2, 7);
  std::map<int, std::map<SentimentLabel, int>> counts;
  for (const Record& rec : records) {
    counts[fa.assignment.at(rec.id)][*rec.label] += 1;
  }
  for (int fold = 0; fold < 2; ++fold) {
    CHECK(counts[fold][SentimentLabel::positive] == 2);
    CHECK(counts[fold][SentimentLabel::negative] == 2);
    CHECK(counts[fold][SentimentLabel::neutral] == 1);
  }
}

TEST_CASE("split_folds partitions and is deterministic") {
  synthetic::CueCorpusOptions options;
  options.count = 103;
  options.seed = 3;
  std::vector<Record> records = synthetic::cue_corpus(options);

  FoldAssignment a = split_folds(records, 5, 42);
  FoldAssignment b = split_folds(records, 5, 42);
  CHECK(a.assignment == b.assignment);

  // Every id appears exactly once, and per-label fold sizes differ by <= 1.
  CHECK(a.assignment.size() == records.size());
  std::map<SentimentLabel, std::map<int, int>> per_label;
  for (const Record& rec : records) {
    REQUIRE(a.assignment.count(rec.id) == 1);
    int fold = a.assignment.at(rec.id);
    CHECK(fold >= 0);
    CHECK(fold < 5);
    per_label[*rec.label][fold] += 1;
  }
  for (const auto& [label, folds] : per_label) {
    int lo = 1 << 30;
    int hi = 0;
    for (int fold = 0; fold < 5; ++fold) {
      auto it = folds.find(fold);
      int n = it == folds.end() ? 0 : it->second;
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    CHECK(hi - lo <= 1);
  }

  FoldAssignment c = split_folds(records, 5, 43);
  CHECK(a.assignment != c.assignment);
}

TEST_CASE("split_folds reports infeasible strata") {
  std::vector<Record> records;
  for (int i = 0; i < 6; ++i) {
    Record rec;
    rec.id = "r" + std::to_string(i);
    rec.sentence = "a b";
    rec.entity_span = {0, 1};
    rec.entity_text = "a";
    rec.label = i == 0 ? SentimentLabel::neutral : SentimentLabel::positive;
    records.push_back(rec);
  }
  CHECK(oracles::throws_with([&] { split_folds(records, 3, 1); }, ErrorKind::validation,
                             "fewer than fold_count"));
}

TEST_CASE("fold assignment JSON round-trips") {
  std::vector<Record> records;
  for (int i = 0; i < 8; ++i) {
    Record rec;
    rec.id = "r" + std::to_string(i);
    rec.sentence = "a b";
    rec.entity_span = {0, 1};
    rec.entity_text = "a";
    rec.label = label_from_index(i % 3 == 2 ? 2 : i % 2);
    records.push_back(rec);
  }
  FoldAssignment fa = split_folds(records, 2, 5);
  FoldAssignment back = FoldAssignment::from_json(fa.to_json());
  CHECK(back.fold_count == fa.fold_count);
  CHECK(back.assignment == fa.assignment);
}
