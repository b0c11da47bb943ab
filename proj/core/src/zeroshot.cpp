#include "nesa/zeroshot.hpp"

#include "nesa/errors.hpp"
#include "nesa/io.hpp"
#include "nesa/tokenizer.hpp"

#include <set>
#include <sstream>

namespace nesa {

PolarityLexicon PolarityLexicon::parse(const std::string& text) {
  PolarityLexicon lex;
  std::vector<std::string>* current = nullptr;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    std::size_t end = line.find_last_not_of(" \t");
    std::string token = line.substr(begin, end - begin + 1);
    if (token[0] == '#') continue;
    if (token == "[good]") {
      current = &lex.good_tokens;
      continue;
    }
    if (token == "[bad]") {
      current = &lex.bad_tokens;
      continue;
    }
    require(current != nullptr, ErrorKind::lexicon,
            "lexicon line " + std::to_string(line_number) + " appears before any section header");
    current->push_back(token);
  }
  require(!lex.good_tokens.empty(), ErrorKind::lexicon, "lexicon [good] section is empty");
  require(!lex.bad_tokens.empty(), ErrorKind::lexicon, "lexicon [bad] section is empty");
  std::set<std::string> good(lex.good_tokens.begin(), lex.good_tokens.end());
  for (const std::string& t : lex.bad_tokens) {
    require(good.find(t) == good.end(), ErrorKind::lexicon,
            "token '" + t + "' appears in both lexicon sections");
  }
  return lex;
}

PolarityLexicon PolarityLexicon::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

namespace {
std::vector<int> resolve_list(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                              std::vector<std::string>& offenders) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& raw : tokens) {
    std::vector<SurfaceToken> surface = lex(raw);
    if (surface.size() != 1 || !vocab.contains(surface[0].text)) {
      offenders.push_back(raw);
      continue;
    }
    ids.push_back(vocab.id(surface[0].text));
  }
  return ids;
}
}  // namespace

std::pair<std::vector<int>, std::vector<int>> PolarityLexicon::resolve(
    const Vocabulary& vocab) const {
  std::vector<std::string> offenders;
  std::vector<int> good = resolve_list(good_tokens, vocab, offenders);
  std::vector<int> bad = resolve_list(bad_tokens, vocab, offenders);
  if (!offenders.empty()) {
    std::string joined;
    for (const std::string& t : offenders) {
      if (!joined.empty()) joined += ", ";
      joined += "'" + t + "'";
    }
    fail(ErrorKind::lexicon, "lexicon tokens not in vocabulary: " + joined);
  }
  return {std::move(good), std::move(bad)};
}

ZeroShotScore zero_shot_score(const Backbone& backbone, const Vocabulary& vocab,
                              const Record& record, const PolarityLexicon& lexicon) {
  auto [good_ids, bad_ids] = lexicon.resolve(vocab);

  TokenizedInput input = tokenize(vocab, record.sentence, record.entity_span);
  std::size_t mask_pos = 0;
  TokenizedInput with_mask = insert_mask_before_entity(input, mask_pos);
  Vector dist = backbone.mlm_distribution(with_mask, mask_pos);

  double good_sum = 0.0;
  for (int id : good_ids) good_sum += dist(id);
  double bad_sum = 0.0;
  for (int id : bad_ids) bad_sum += dist(id);

  ZeroShotScore score;
  score.p_good = good_sum / static_cast<double>(good_ids.size());
  score.p_bad = bad_sum / static_cast<double>(bad_ids.size());
  score.margin = score.p_good - score.p_bad;
  score.label = score.p_good > score.p_bad ? SentimentLabel::positive : SentimentLabel::negative;
  double mass = good_sum + bad_sum;
  score.margin_renormalized = mass > 0.0 ? (good_sum - bad_sum) / mass : 0.0;
  return score;
}

}  // namespace nesa
