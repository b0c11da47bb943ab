#pragma once

#include "nesa/types.hpp"
#include "nesa/vocab.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nesa {

// A surface token with its code-point extent in the source sentence.
struct SurfaceToken {
  std::string text;  // lowered, UTF-8
  CharSpan extent;
};

// Whitespace-plus-punctuation lexer over code points, lowered.
std::vector<SurfaceToken> lex(const std::string& sentence);

struct TokenizedInput {
  std::vector<int> token_ids;
  TokenSpan entity_span;  // (k, m) half-open
  bool is_masked = false;
  bool has_sentiment_token = false;
  // Position k of the inserted [SENTIMENT] token, set by insert_sentiment_token.
  std::optional<std::size_t> sentiment_pos;

  std::size_t size() const { return token_ids.size(); }
};

// Maps a sentence and entity character span to ids and a token span covering
// exactly the tokens that overlap the character span.
TokenizedInput tokenize(const Vocabulary& vocab, const std::string& sentence, CharSpan span);

// Replaces each entity token with its own [MASK]; length and span unchanged.
TokenizedInput mask_entity(const TokenizedInput& input);

// Inserts [SENTIMENT] directly before the entity; length grows by one and the
// entity span shifts right by one.
TokenizedInput insert_sentiment_token(const TokenizedInput& input);

// Inserts a [MASK] directly before the entity (insertion, not replacement);
// returns the modified input and stores the mask position in mask_pos.
TokenizedInput insert_mask_before_entity(const TokenizedInput& input, std::size_t& mask_pos);

}  // namespace nesa
