#pragma once

#include "nesa/checkpoint.hpp"
#include "nesa/model.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace nesa {

struct TrainLogEntry {
  long long step = 0;
  double lr_backbone = 0.0;
  double lr_head = 0.0;
  double loss = 0.0;
  std::optional<double> val_macro_f1_pn;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<TrainLogEntry> log;
  long long total_steps = 0;
  std::vector<long long> validation_steps;
};

// One cross-validation fold: epochs * ceil(|train| / batch_size) optimizer
// steps with the two-group warmup/decay schedule, validation every
// half-epoch (in optimizer steps) and at the final step, returning the
// checkpoint with the highest validation macro F1_pn (earliest step wins
// ties). Deterministic for a fixed seed: shuffle order is derived from
// (seed, epoch), dropout masks from one seeded stream.
TrainResult train_fold(const TrainConfig& config, const Vocabulary& vocab,
                       const std::vector<Record>& train_records,
                       const std::vector<Record>& val_records,
                       const BackboneFactory& factory = {}, std::ostream* log_stream = nullptr,
                       int jobs = 1);

// The half-epoch validation marks for a run of total_steps = epochs * E.
std::vector<long long> validation_schedule(long long steps_per_epoch, int epochs);

// Validation macro F1_pn of a model on labeled records (plain argmax).
double validation_macro_f1_pn(const SentimentModel& model, const std::vector<Record>& records,
                              const std::vector<TokenizedInput>& inputs, int jobs);

// T train-mode forward passes with dropout active; arithmetic mean of the
// final logits.
LogitSet mc_dropout_predict(const Checkpoint& checkpoint, const TokenizedInput& input, int T,
                            Rng& rng);

struct MlmConfig {
  int epochs = 20;
  int batch_size = 16;
  double lr = 1e-3;
  double mask_prob = 0.15;
  std::uint64_t seed = 0;
};

// Random-mask language-model fitting for the toy encoder; returns the mean
// masked-token loss of the final epoch.
double train_mlm(ToyEncoder& encoder, const Vocabulary& vocab,
                 const std::vector<std::string>& sentences, const MlmConfig& config);

}  // namespace nesa
