#include "nesa/decision.hpp"
#include "nesa/heads.hpp"
#include "nesa/model.hpp"
#include "nesa/tokenizer.hpp"

#include "synthetic.hpp"

#include <benchmark/benchmark.h>

namespace {

struct BenchSetup {
  std::vector<nesa::Record> records;
  nesa::Vocabulary vocab;
  nesa::TrainConfig config;

  BenchSetup() {
    nesa::synthetic::CueCorpusOptions options;
    options.count = 256;
    options.seed = 2;
    records = nesa::synthetic::cue_corpus(options);
    vocab = nesa::Vocabulary::build(records);
    config.seed = 3;
  }
};

BenchSetup& setup() {
  static BenchSetup instance;
  return instance;
}

void BM_Tokenize(benchmark::State& state) {
  auto& s = setup();
  std::size_t i = 0;
  for (auto _ : state) {
    const nesa::Record& rec = s.records[i++ % s.records.size()];
    benchmark::DoNotOptimize(nesa::tokenize(s.vocab, rec.sentence, rec.entity_span));
  }
}
BENCHMARK(BM_Tokenize);

void BM_HamamEvalForward(benchmark::State& state) {
  auto& s = setup();
  nesa::SentimentModel model = nesa::SentimentModel::create(s.config, s.vocab);
  nesa::TokenizedInput input = model.prepare(s.records.front());
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.forward_eval(input));
  }
}
BENCHMARK(BM_HamamEvalForward);

void BM_TrainStep(benchmark::State& state) {
  auto& s = setup();
  nesa::SentimentModel model = nesa::SentimentModel::create(s.config, s.vocab);
  nesa::TokenizedInput input = model.prepare(s.records.front());
  nesa::Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.train_forward(input, nesa::SentimentLabel::positive,
                                                 nesa::Mode::train, &rng, true, 1.0));
    nesa::zero_grads(model.parameters());
  }
}
BENCHMARK(BM_TrainStep);

void BM_MeanMaxPool(benchmark::State& state) {
  nesa::Matrix h = nesa::Matrix::Random(24, 64);
  nesa::TokenSpan span{5, 9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(nesa::mean_pool(h, span));
    benchmark::DoNotOptimize(nesa::max_pool(h, span));
  }
}
BENCHMARK(BM_MeanMaxPool);

void BM_SoftmaxDecide(benchmark::State& state) {
  nesa::Logits logits{0.4, -0.2, 0.9};
  nesa::DecisionConfig config{0.55};
  for (auto _ : state) {
    benchmark::DoNotOptimize(nesa::decide(nesa::softmax3(logits), config));
  }
}
BENCHMARK(BM_SoftmaxDecide);

}  // namespace

BENCHMARK_MAIN();
