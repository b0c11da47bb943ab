#pragma once

#include "nesa/toy_encoder.hpp"
#include "nesa/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace nesa {

enum class HeadVariant { hamam, pooled_sentiment };
enum class OptimizerKind { adamw, sgd };

const char* to_string(HeadVariant variant);
const char* to_string(OptimizerKind kind);

// Every training hyperparameter plus the knobs behind recorded design
// decisions. Serializes to a flat key = value file; unknown keys are
// rejected, missing keys take the defaults below.
struct TrainConfig {
  int epochs = 6;
  int batch_size = 8;
  double backbone_max_lr = 1e-5;
  double head_max_lr = 1e-4;
  double warmup_fraction = 0.1;
  double dropout_rate = 0.5;
  int dropout_samples = 5;
  Logits class_weights{1.0, 1.0, 0.1};  // positive, negative, neutral
  int fold_count = 5;
  std::uint64_t seed = 0;
  std::optional<double> neutral_threshold;  // decision-time only
  HeadVariant head_variant = HeadVariant::hamam;

  bool entity_masking = true;  // false trains the single-pass ablation
  OptimizerKind optimizer = OptimizerKind::adamw;
  double weight_decay = 0.01;
  double grad_clip = 1.0;  // <= 0 disables clipping

  int hidden_size = 64;
  int num_layers = 2;
  int num_heads = 4;
  int ff_size = 256;
  int max_seq_len = 128;
  double init_std = 0.15;

  EncoderConfig encoder_config() const;
  void validate() const;
};

std::string serialize_train_config(const TrainConfig& config);
TrainConfig parse_train_config(const std::string& text);
TrainConfig load_train_config(const std::filesystem::path& path);

}  // namespace nesa
