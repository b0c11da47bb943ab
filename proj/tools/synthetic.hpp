#pragma once

#include "nesa/record.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nesa::synthetic {

// Cue vocabulary used by the generators; disjoint between polarities and
// from every filler word, so adjacency alone determines the label.
const std::vector<std::string>& positive_cues();
const std::vector<std::string>& negative_cues();

struct CueCorpusOptions {
  std::size_t count = 2000;
  double pos_fraction = 0.28;
  double neg_fraction = 0.28;
  std::uint64_t seed = 1;
  // Difficulty knobs. The defaults give a naturalistic corpus (full cue and
  // entity pools, filler context). Trimmed pools with fillers off yield the
  // concentrated corpus that paper-scale learning rates can fit from
  // scratch within six epochs.
  std::size_t cues_per_class = 0;  // 0 = full pool
  std::size_t entity_pool = 0;     // 0 = full pool
  bool fillers = true;
};

// The concentrated setup: thirds-balanced classes, two cues per class,
// four entities, no filler context.
CueCorpusOptions learnable_cue_options(std::size_t count, std::uint64_t seed);

// Sentences whose sentiment is carried entirely by a cue word directly
// adjacent to the entity; neutral sentences contain no polar cue at all.
std::vector<Record> cue_corpus(const CueCorpusOptions& options);

// Bag-of-adjacent-words reference rule: positive/negative when a polar cue
// token touches the entity span, neutral otherwise. Exact on cue_corpus.
SentimentLabel adjacent_cue_oracle(const Record& record);

struct MaskingProbe {
  std::vector<Record> train;
  std::vector<Record> val;
};

// One entity string occurs only with positive labels in train but appears
// in negative cue contexts in val; the rest of both splits is balanced.
// Uses the concentrated sentence shape so the bias is learnable at
// paper-scale learning rates.
MaskingProbe masking_probe(std::size_t train_count, std::size_t val_count, std::uint64_t seed);

struct MlmCorpus {
  std::vector<Record> train;        // "<subject> <verb> the <adjective> <Entity> <tail>"
  std::vector<Record> eval;         // same pattern without the adjective, labeled by verb polarity
  std::string lexicon_text;         // [good]/[bad] adjective lists
};

MlmCorpus mlm_corpus(std::size_t train_count, std::size_t eval_count, std::uint64_t seed);

}  // namespace nesa::synthetic
