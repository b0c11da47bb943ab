#include "nesa/tokenizer.hpp"

#include "nesa/errors.hpp"
#include "nesa/utf8.hpp"

namespace nesa {

std::vector<SurfaceToken> lex(const std::string& sentence) {
  std::u32string text = utf8_decode(sentence);
  std::vector<SurfaceToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = text[i];
    if (is_space_codepoint(cp)) {
      ++i;
      continue;
    }
    if (is_punct_codepoint(cp)) {
      std::u32string one(1, lower_codepoint(cp));
      tokens.push_back({utf8_encode(one), CharSpan{i, i + 1}});
      ++i;
      continue;
    }
    std::size_t start = i;
    std::u32string word;
    while (i < text.size() && !is_space_codepoint(text[i]) && !is_punct_codepoint(text[i])) {
      word.push_back(lower_codepoint(text[i]));
      ++i;
    }
    tokens.push_back({utf8_encode(word), CharSpan{start, i}});
  }
  return tokens;
}

TokenizedInput tokenize(const Vocabulary& vocab, const std::string& sentence, CharSpan span) {
  require(span.begin < span.end, ErrorKind::contract,
          "tokenize: empty entity span rejected upstream");
  std::vector<SurfaceToken> surface = lex(sentence);

  TokenizedInput input;
  input.token_ids.reserve(surface.size());
  std::size_t k = surface.size();
  std::size_t m = 0;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    input.token_ids.push_back(vocab.id(surface[i].text));
    bool overlaps = surface[i].extent.begin < span.end && surface[i].extent.end > span.begin;
    if (overlaps) {
      k = std::min(k, i);
      m = std::max(m, i + 1);
    }
  }
  require(k < m, ErrorKind::alignment,
          "no token overlaps the entity span [" + std::to_string(span.begin) + ", " +
              std::to_string(span.end) + ")");
  input.entity_span = TokenSpan{k, m};
  return input;
}

TokenizedInput mask_entity(const TokenizedInput& input) {
  require(!input.is_masked, ErrorKind::contract, "mask_entity: input already masked");
  require(!input.has_sentiment_token, ErrorKind::contract,
          "mask_entity: input carries a [SENTIMENT] token");
  TokenizedInput out = input;
  for (std::size_t i = out.entity_span.begin; i < out.entity_span.end; ++i) {
    out.token_ids[i] = Vocabulary::kMask;
  }
  out.is_masked = true;
  return out;
}

namespace {

TokenizedInput insert_before_entity(const TokenizedInput& input, int token_id) {
  require(!input.is_masked, ErrorKind::contract, "insert: input already masked");
  require(!input.has_sentiment_token, ErrorKind::contract,
          "insert: input already carries a [SENTIMENT] token");
  TokenizedInput out = input;
  std::size_t k = input.entity_span.begin;
  out.token_ids.insert(out.token_ids.begin() + static_cast<std::ptrdiff_t>(k), token_id);
  out.entity_span = TokenSpan{k + 1, input.entity_span.end + 1};
  return out;
}

}  // namespace

TokenizedInput insert_sentiment_token(const TokenizedInput& input) {
  std::size_t k = input.entity_span.begin;
  TokenizedInput out = insert_before_entity(input, Vocabulary::kSentiment);
  out.has_sentiment_token = true;
  out.sentiment_pos = k;
  return out;
}

TokenizedInput insert_mask_before_entity(const TokenizedInput& input, std::size_t& mask_pos) {
  mask_pos = input.entity_span.begin;
  return insert_before_entity(input, Vocabulary::kMask);
}

}  // namespace nesa
