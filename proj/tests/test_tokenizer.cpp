#include "nesa/errors.hpp"
#include "nesa/tokenizer.hpp"
#include "nesa/vocab.hpp"

#include <doctest.h>

using namespace nesa;

namespace {
Vocabulary vocab_of(const std::vector<std::string>& tokens) {
  return Vocabulary::from_tokens(tokens);
}
}  // namespace

TEST_CASE("whitespace tokenization aligns a single-token entity") {
  Vocabulary v = vocab_of({"bank", "failed", "today"});
  TokenizedInput input = tokenize(v, "Bank failed today", CharSpan{0, 4});
  CHECK(input.token_ids.size() == 3);
  CHECK(input.entity_span == TokenSpan{0, 1});
  CHECK(input.token_ids[0] == v.id("bank"));
}

TEST_CASE("multi-token overlap covers every touched token") {
  Vocabulary v = vocab_of({"x", "met", "bank", "of", "a"});
  TokenizedInput input = tokenize(v, "X met Bank of A", CharSpan{6, 15});
  CHECK(input.entity_span == TokenSpan{2, 5});
}

TEST_CASE("empty spans are rejected upstream") {
  Vocabulary v = vocab_of({"ab"});
  CHECK_THROWS_AS(tokenize(v, "ab", CharSpan{1, 1}), Error);
}

TEST_CASE("a span inside stripped whitespace is an alignment error") {
  Vocabulary v = vocab_of({"a", "b"});
  try {
    tokenize(v, "a  b", CharSpan{2, 3});  // the second space only
    FAIL("expected alignment error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::alignment);
  }
}

TEST_CASE("punctuation splits off and unknown words map to [UNK]") {
  Vocabulary v = vocab_of({"bank", "failed"});
  TokenizedInput input = tokenize(v, "Bank failed, badly", CharSpan{0, 4});
  // bank failed , badly
  CHECK(input.token_ids.size() == 4);
  CHECK(input.token_ids[2] == v.id(","));
  CHECK(input.token_ids[2] == Vocabulary::kUnk);  // ',' not in this vocab
  CHECK(input.token_ids[3] == Vocabulary::kUnk);
}

TEST_CASE("cyrillic text lowers and aligns by code points") {
  Vocabulary v = vocab_of({"суд", "осудил", "банк"});
  TokenizedInput input = tokenize(v, "Суд осудил Банк", CharSpan{11, 15});
  CHECK(input.token_ids.size() == 3);
  CHECK(input.entity_span == TokenSpan{2, 3});
  CHECK(input.token_ids[2] == v.id("банк"));
}

TEST_CASE("mask_entity replaces each entity token and nothing else") {
  Vocabulary v = vocab_of({"a", "b", "c", "d"});
  TokenizedInput input = tokenize(v, "a b c d", CharSpan{2, 5});  // b c
  TokenizedInput masked = mask_entity(input);
  CHECK(masked.token_ids.size() == input.token_ids.size());
  CHECK(masked.entity_span == input.entity_span);
  CHECK(masked.is_masked);
  CHECK(masked.token_ids[1] == Vocabulary::kMask);
  CHECK(masked.token_ids[2] == Vocabulary::kMask);
  CHECK(masked.token_ids[0] == input.token_ids[0]);
  CHECK(masked.token_ids[3] == input.token_ids[3]);
  // the original is untouched
  CHECK_FALSE(input.is_masked);
  CHECK(input.token_ids[1] == v.id("b"));
}

TEST_CASE("masking twice is a contract violation") {
  Vocabulary v = vocab_of({"a", "b"});
  TokenizedInput input = tokenize(v, "a b", CharSpan{0, 1});
  TokenizedInput masked = mask_entity(input);
  CHECK_THROWS_AS(mask_entity(masked), Error);
}

TEST_CASE("insert_sentiment_token shifts the span by one") {
  Vocabulary v = vocab_of({"a", "b", "c"});
  TokenizedInput input = tokenize(v, "a b c", CharSpan{2, 3});  // b
  TokenizedInput marked = insert_sentiment_token(input);
  CHECK(marked.token_ids.size() == input.token_ids.size() + 1);
  CHECK(marked.token_ids[1] == Vocabulary::kSentiment);
  CHECK(marked.entity_span == TokenSpan{2, 3});
  CHECK(marked.has_sentiment_token);
  CHECK(*marked.sentiment_pos == 1);
  CHECK_THROWS_AS(insert_sentiment_token(marked), Error);
  CHECK_THROWS_AS(mask_entity(marked), Error);
}

TEST_CASE("insert_sentiment_token handles a leading entity") {
  Vocabulary v = vocab_of({"e"});
  TokenizedInput input = tokenize(v, "e", CharSpan{0, 1});
  TokenizedInput marked = insert_sentiment_token(input);
  CHECK(marked.token_ids.size() == 2);
  CHECK(marked.token_ids[0] == Vocabulary::kSentiment);
  CHECK(marked.entity_span == TokenSpan{1, 2});
}

TEST_CASE("insert_mask_before_entity reports the mask position") {
  Vocabulary v = vocab_of({"a", "b", "c"});
  TokenizedInput input = tokenize(v, "a b c", CharSpan{2, 3});
  std::size_t pos = 99;
  TokenizedInput with_mask = insert_mask_before_entity(input, pos);
  CHECK(pos == 1);
  CHECK(with_mask.token_ids[1] == Vocabulary::kMask);
  CHECK(with_mask.entity_span == TokenSpan{2, 3});
  CHECK_FALSE(with_mask.is_masked);
  CHECK_FALSE(with_mask.has_sentiment_token);
}

TEST_CASE("vocabulary file format pins the specials to the first lines") {
  Vocabulary v = vocab_of({"b", "a"});
  std::string text = v.to_text();
  CHECK(text == "[PAD]\n[UNK]\n[MASK]\n[SENTIMENT]\na\nb\n");
  Vocabulary back = Vocabulary::from_text(text);
  CHECK(back.size() == v.size());
  CHECK(back.id("a") == v.id("a"));
  CHECK(back.hash() == v.hash());
  CHECK_THROWS_AS(Vocabulary::from_text("[PAD]\n[MASK]\n[UNK]\n[SENTIMENT]\na\n"), Error);
}
