#include "synthetic.hpp"

#include "nesa/errors.hpp"
#include "nesa/rng.hpp"
#include "nesa/tokenizer.hpp"
#include "nesa/utf8.hpp"

#include <set>

namespace nesa::synthetic {

namespace {

const std::vector<std::string> kPositiveCues = {
    "praised", "acclaimed", "thriving", "celebrated", "admired", "flourishing",
    "prospering", "honored"};

const std::vector<std::string> kNegativeCues = {
    "condemned", "collapsing", "bankrupt", "accused", "failing", "disgraced",
    "sanctioned", "indicted"};

// Adjacent vocabulary for neutral sentences; disjoint from both cue lists.
const std::vector<std::string> kNeutralAdjacent = {
    "reported", "mentioned", "listed",   "registered", "contacted",
    "visited",  "described", "reviewed", "measured",   "surveyed"};

const std::vector<std::string> kPrefixes = {
    "analysts said",        "the ministry noted",   "local outlets reported",
    "earlier today",        "according to sources", "this quarter",
    "market watchers say",  "in a brief statement", "the regional desk wrote",
    "over the weekend"};

const std::vector<std::string> kSuffixes = {
    "in the capital",       "after the review",  "during the session",
    "despite the forecast", "before the vote",   "across the region",
    "on short notice",      "amid the reshuffle", "under the new rules",
    "late on friday"};

const std::vector<std::string> kEntities = {
    "Norvax",   "Tellara",  "Quintor",  "Velmont",  "Ostrakon", "Bellweather",
    "Marivo",   "Dunmore",  "Keldan",   "Virelia",  "Sandrix",  "Polaron",
    "Medwyn",   "Tarquin",  "Lovell",   "Brenmore", "Caldera",  "Fenwick",
    "Galtero",  "Hexley",   "Norvax Group",     "Tellara Bank",    "Quintor Labs",
    "Velmont Holdings", "Ostrakon Media", "Keldan Partners", "Virelia Fund",
    "Polaron Energy",   "Caldera Systems", "Fenwick Trust"};

// Held out of kEntities so its only label statistics are the ones the
// masking probe plants.
const std::string kBiasedEntity = "Zorvex";

const std::vector<std::string> kMlmSubjects = {"fans",      "investors", "residents",
                                               "customers", "viewers",   "analysts"};
const std::vector<std::string> kMlmPosVerbs = {"cheered", "applauded", "celebrated", "praised",
                                               "endorsed"};
const std::vector<std::string> kMlmNegVerbs = {"condemned", "protested", "denounced", "blamed",
                                               "sued"};
const std::vector<std::string> kGoodAdjectives = {"wonderful", "excellent", "beloved",
                                                  "prosperous", "brilliant"};
const std::vector<std::string> kBadAdjectives = {"terrible", "corrupt", "disastrous", "hated",
                                                 "shameful"};
const std::vector<std::string> kMlmTails = {"yesterday", "today", "again", "loudly", "publicly"};

const std::string& pick(const std::vector<std::string>& pool, Rng& rng) {
  return pool[rng.uniform_int(pool.size())];
}

std::size_t cp_length(const std::string& text) { return utf8_decode(text).size(); }

// Assembles space-joined words, tracking the code-point span of the entity.
struct SentenceBuilder {
  std::string sentence;
  std::size_t cp_len = 0;
  CharSpan entity_span{};

  void add(const std::string& words) {
    if (!sentence.empty()) {
      sentence += ' ';
      ++cp_len;
    }
    sentence += words;
    cp_len += cp_length(words);
  }

  void add_entity(const std::string& entity) {
    if (!sentence.empty()) {
      sentence += ' ';
      ++cp_len;
    }
    entity_span.begin = cp_len;
    sentence += entity;
    cp_len += cp_length(entity);
    entity_span.end = cp_len;
  }
};

struct CuePools {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::vector<std::string> neutral;
  std::vector<std::string> entities;
  bool fillers = true;

  static CuePools trimmed(std::size_t cues_per_class, std::size_t entity_pool, bool fillers) {
    auto take = [](const std::vector<std::string>& pool, std::size_t n) {
      if (n == 0 || n >= pool.size()) return pool;
      return std::vector<std::string>(pool.begin(), pool.begin() + static_cast<long>(n));
    };
    CuePools pools;
    pools.positive = take(kPositiveCues, cues_per_class);
    pools.negative = take(kNegativeCues, cues_per_class);
    pools.neutral = take(kNeutralAdjacent, cues_per_class);
    pools.entities = take(kEntities, entity_pool);
    pools.fillers = fillers;
    return pools;
  }
};

Record make_cue_record(std::string id, SentimentLabel label, const std::string& entity,
                       const CuePools& pools, Rng& rng) {
  SentenceBuilder b;
  if (pools.fillers) b.add(pick(kPrefixes, rng));
  const bool cue_before = !pools.fillers || rng.bernoulli(0.5);
  if (label == SentimentLabel::neutral) {
    if (!pools.fillers || rng.bernoulli(0.7)) b.add(pick(pools.neutral, rng));
    b.add_entity(entity);
  } else {
    const auto& cues = label == SentimentLabel::positive ? pools.positive : pools.negative;
    if (cue_before) {
      b.add(pick(cues, rng));
      b.add_entity(entity);
    } else {
      b.add_entity(entity);
      b.add(pick(cues, rng));
    }
  }
  if (pools.fillers) b.add(pick(kSuffixes, rng));
  b.add(".");

  Record rec;
  rec.id = std::move(id);
  rec.sentence = b.sentence;
  rec.entity_span = b.entity_span;
  rec.entity_text = entity;
  rec.label = label;
  return rec;
}

std::string zero_pad(std::size_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

const std::vector<std::string>& positive_cues() { return kPositiveCues; }
const std::vector<std::string>& negative_cues() { return kNegativeCues; }

CueCorpusOptions learnable_cue_options(std::size_t count, std::uint64_t seed) {
  CueCorpusOptions options;
  options.count = count;
  options.seed = seed;
  options.pos_fraction = 1.0 / 3.0;
  options.neg_fraction = 1.0 / 3.0;
  options.cues_per_class = 2;
  options.entity_pool = 4;
  options.fillers = false;
  return options;
}

std::vector<Record> cue_corpus(const CueCorpusOptions& options) {
  require(options.pos_fraction > 0.0 && options.neg_fraction > 0.0 &&
              options.pos_fraction + options.neg_fraction < 1.0,
          ErrorKind::config, "cue corpus fractions must be positive and sum below 1");
  Rng rng(derive_seed(options.seed, 0xC0E));
  CuePools pools =
      CuePools::trimmed(options.cues_per_class, options.entity_pool, options.fillers);
  const auto n_pos = static_cast<std::size_t>(options.pos_fraction *
                                              static_cast<double>(options.count));
  const auto n_neg = static_cast<std::size_t>(options.neg_fraction *
                                              static_cast<double>(options.count));
  std::vector<Record> records;
  records.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    SentimentLabel label = i < n_pos                ? SentimentLabel::positive
                           : i < n_pos + n_neg      ? SentimentLabel::negative
                                                    : SentimentLabel::neutral;
    records.push_back(
        make_cue_record("cue-" + zero_pad(i, 5), label, pick(pools.entities, rng), pools, rng));
  }
  return records;
}

SentimentLabel adjacent_cue_oracle(const Record& record) {
  std::vector<SurfaceToken> tokens = lex(record.sentence);
  std::size_t k = tokens.size();
  std::size_t m = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    bool overlaps = tokens[i].extent.begin < record.entity_span.end &&
                    tokens[i].extent.end > record.entity_span.begin;
    if (overlaps) {
      k = std::min(k, i);
      m = std::max(m, i + 1);
    }
  }
  require(k < m, ErrorKind::alignment, "oracle: no token overlaps the entity span");

  static const std::set<std::string> pos(kPositiveCues.begin(), kPositiveCues.end());
  static const std::set<std::string> neg(kNegativeCues.begin(), kNegativeCues.end());
  std::vector<std::string> adjacent;
  if (k > 0) adjacent.push_back(tokens[k - 1].text);
  if (m < tokens.size()) adjacent.push_back(tokens[m].text);
  for (const std::string& word : adjacent) {
    if (pos.count(word) > 0) return SentimentLabel::positive;
  }
  for (const std::string& word : adjacent) {
    if (neg.count(word) > 0) return SentimentLabel::negative;
  }
  return SentimentLabel::neutral;
}

MaskingProbe masking_probe(std::size_t train_count, std::size_t val_count, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xB1A5));
  CuePools pools = CuePools::trimmed(2, 4, /*fillers=*/false);
  MaskingProbe probe;
  probe.train.reserve(train_count);
  probe.val.reserve(val_count);

  for (std::size_t i = 0; i < train_count; ++i) {
    std::string id = "probe-tr-" + zero_pad(i, 5);
    switch (i % 4) {
      case 0:
        probe.train.push_back(
            make_cue_record(std::move(id), SentimentLabel::positive, kBiasedEntity, pools, rng));
        break;
      case 1:
        probe.train.push_back(make_cue_record(std::move(id), SentimentLabel::positive,
                                              pick(pools.entities, rng), pools, rng));
        break;
      case 2:
        probe.train.push_back(make_cue_record(std::move(id), SentimentLabel::negative,
                                              pick(pools.entities, rng), pools, rng));
        break;
      default:
        probe.train.push_back(make_cue_record(std::move(id), SentimentLabel::neutral,
                                              pick(pools.entities, rng), pools, rng));
        break;
    }
  }
  for (std::size_t i = 0; i < val_count; ++i) {
    std::string id = "probe-va-" + zero_pad(i, 5);
    switch (i % 5) {
      case 0:
      case 1:
        probe.val.push_back(
            make_cue_record(std::move(id), SentimentLabel::negative, kBiasedEntity, pools, rng));
        break;
      case 2:
        probe.val.push_back(make_cue_record(std::move(id), SentimentLabel::positive,
                                            pick(pools.entities, rng), pools, rng));
        break;
      case 3:
        probe.val.push_back(make_cue_record(std::move(id), SentimentLabel::negative,
                                            pick(pools.entities, rng), pools, rng));
        break;
      default:
        probe.val.push_back(make_cue_record(std::move(id), SentimentLabel::neutral,
                                            pick(pools.entities, rng), pools, rng));
        break;
    }
  }
  return probe;
}

MlmCorpus mlm_corpus(std::size_t train_count, std::size_t eval_count, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x313C));
  MlmCorpus corpus;
  corpus.train.reserve(train_count);
  corpus.eval.reserve(eval_count);

  auto make = [&rng](std::string id, bool positive, bool with_adjective) {
    SentenceBuilder b;
    b.add(pick(kMlmSubjects, rng));
    b.add(pick(positive ? kMlmPosVerbs : kMlmNegVerbs, rng));
    b.add("the");
    if (with_adjective) b.add(pick(positive ? kGoodAdjectives : kBadAdjectives, rng));
    // single-token entities keep the mask slot directly before the name
    const std::string& entity = kEntities[rng.uniform_int(20)];
    b.add_entity(entity);
    b.add(pick(kMlmTails, rng));
    b.add(".");

    Record rec;
    rec.id = std::move(id);
    rec.sentence = b.sentence;
    rec.entity_span = b.entity_span;
    rec.entity_text = entity;
    rec.label = positive ? SentimentLabel::positive : SentimentLabel::negative;
    return rec;
  };

  for (std::size_t i = 0; i < train_count; ++i) {
    corpus.train.push_back(make("mlm-tr-" + zero_pad(i, 5), i % 2 == 0, true));
  }
  for (std::size_t i = 0; i < eval_count; ++i) {
    corpus.eval.push_back(make("mlm-ev-" + zero_pad(i, 5), i % 2 == 0, false));
  }

  std::string lexicon = "[good]\n";
  for (const std::string& w : kGoodAdjectives) lexicon += w + "\n";
  lexicon += "[bad]\n";
  for (const std::string& w : kBadAdjectives) lexicon += w + "\n";
  corpus.lexicon_text = std::move(lexicon);
  return corpus;
}

}  // namespace nesa::synthetic
