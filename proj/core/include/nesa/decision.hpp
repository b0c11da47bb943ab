#pragma once

#include "nesa/checkpoint.hpp"
#include "nesa/record.hpp"
#include "nesa/types.hpp"

#include <optional>
#include <vector>

namespace nesa {

struct DecisionConfig {
  std::optional<double> neutral_threshold;
};

// Overflow-safe softmax over the three class logits.
Eigen::Vector3d softmax3(const Logits& logits);

// Plain argmax with the fixed tie order positive < negative < neutral.
// With a threshold t: a top-ranked neutral whose probability is strictly
// below t is demoted to the most probable of positive/negative.
SentimentLabel decide(const Eigen::Vector3d& probs, const DecisionConfig& config);

// Componentwise arithmetic mean of final logits.
LogitSet ensemble_logits(const std::vector<LogitSet>& members);

struct Prediction {
  SentimentLabel label = SentimentLabel::neutral;
  Eigen::Vector3d probs = Eigen::Vector3d::Zero();
  std::vector<Logits> per_model;
};

// Each checkpoint tokenizes the record with its own vocabulary and runs its
// own head variant in eval mode; final logits are ensembled uniformly.
Prediction predict(const std::vector<const Checkpoint*>& checkpoints, const Record& record,
                   const DecisionConfig& config);

}  // namespace nesa
