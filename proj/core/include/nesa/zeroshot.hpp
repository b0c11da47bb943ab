#pragma once

#include "nesa/backbone.hpp"
#include "nesa/record.hpp"
#include "nesa/vocab.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace nesa {

// Two disjoint lists of sentiment-bearing tokens; every token must resolve
// to a single vocabulary id at scoring time.
struct PolarityLexicon {
  std::vector<std::string> good_tokens;
  std::vector<std::string> bad_tokens;

  // Two-section plain text: [good] / [bad] headers, one token per line,
  // '#' comments allowed.
  static PolarityLexicon parse(const std::string& text);
  static PolarityLexicon load(const std::filesystem::path& path);

  // Throws a lexicon error listing every unresolvable token.
  std::pair<std::vector<int>, std::vector<int>> resolve(const Vocabulary& vocab) const;
};

struct ZeroShotScore {
  SentimentLabel label = SentimentLabel::negative;  // positive or negative only
  double p_good = 0.0;
  double p_bad = 0.0;
  double margin = 0.0;  // p_good - p_bad
  // Margin after renormalizing over the lexicon subset; meaningful when the
  // two lists differ in size.
  double margin_renormalized = 0.0;
};

// Inserts a [MASK] right before the entity (sequence grows by one), reads
// the MLM distribution at the mask, and compares the mean probability of
// the good tokens against the bad ones. Ties go to negative.
ZeroShotScore zero_shot_score(const Backbone& backbone, const Vocabulary& vocab,
                              const Record& record, const PolarityLexicon& lexicon);

}  // namespace nesa
