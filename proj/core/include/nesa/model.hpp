#pragma once

#include "nesa/heads.hpp"
#include "nesa/record.hpp"
#include "nesa/toy_encoder.hpp"
#include "nesa/train_config.hpp"
#include "nesa/vocab.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace nesa {

// Builds the trainable encoder for a run. The default constructs the
// reference ToyEncoder from the config dimensions; adapters may substitute
// their own as long as it honors the Backbone contract.
using BackboneFactory =
    std::function<std::unique_ptr<ToyEncoder>(const EncoderConfig&, int vocab_size, Rng&)>;

// A classifier bound to its vocabulary: reference encoder plus head, built
// from one TrainConfig. Checkpoints serialize exactly this.
class SentimentModel {
 public:
  static SentimentModel create(const TrainConfig& config, Vocabulary vocab,
                               const BackboneFactory& factory = {});

  const TrainConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  ToyEncoder& encoder() { return *encoder_; }
  const ToyEncoder& encoder() const { return *encoder_; }
  ClassifierHead& head() { return *head_; }
  const ClassifierHead& head() const { return *head_; }

  TokenizedInput prepare(const Record& record) const;

  // Deterministic eval-mode logits for the configured head variant.
  LogitSet forward_eval(const TokenizedInput& input) const;

  // Training-path forward; optionally accumulates parameter gradients with
  // upstream (grad_scale * dCE/dlogits). Dropout masks may be replayed or
  // recorded per head call, in call order (mean, max, masked mean,
  // masked max; the pooled variant makes a single call).
  double train_forward(const TokenizedInput& input, SentimentLabel gold, Mode mode, Rng* rng,
                       bool accumulate_grads, double grad_scale,
                       const std::vector<DropoutMasks>* replay = nullptr,
                       std::vector<DropoutMasks>* record = nullptr,
                       Logits* final_logits = nullptr);

  std::vector<Parameter*> backbone_parameters() { return encoder_->parameters(); }
  std::vector<Parameter*> head_parameters() { return head_->parameters(); }
  std::vector<Parameter*> parameters();

  std::vector<Matrix> snapshot_parameters();
  void restore_parameters(const std::vector<Matrix>& snapshot);

 private:
  SentimentModel(TrainConfig config, Vocabulary vocab, const BackboneFactory& factory);

  TrainConfig config_;
  Vocabulary vocab_;
  std::unique_ptr<ToyEncoder> encoder_;
  std::unique_ptr<ClassifierHead> head_;
};

}  // namespace nesa
