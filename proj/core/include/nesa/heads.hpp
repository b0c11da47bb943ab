#pragma once

#include "nesa/backbone.hpp"
#include "nesa/nn.hpp"
#include "nesa/rng.hpp"
#include "nesa/types.hpp"

#include <optional>
#include <vector>

namespace nesa {

enum class Mode { train, eval };

enum class PoolKind { mean, max, sentiment_token };

struct PooledVector {
  Vector v;
  PoolKind kind;
};

PooledVector mean_pool(const HiddenStates& hidden, TokenSpan span);
PooledVector max_pool(const HiddenStates& hidden, TokenSpan span);

void mean_pool_backward(const Vector& d_pooled, TokenSpan span, Matrix& d_hidden);
// Ties resolve to the first maximal row, matching the forward pass.
void max_pool_backward(const Vector& d_pooled, const HiddenStates& hidden, TokenSpan span,
                       Matrix& d_hidden);

// The multiplicative masks actually applied (0 or 1/(1-rate) per entry).
using DropoutMasks = std::vector<Vector>;

struct HeadTrace {
  Vector input;
  Vector h;  // tanh(W1 v + b1)
  DropoutMasks masks;
  bool stochastic = false;  // whether the masked train path ran
};

// Classifier stack: linear [N x N] -> tanh -> multi-sample dropout -> linear
// [N -> 3]. Train mode draws sample_count inverted-dropout masks after the
// tanh and averages the resulting logits; eval mode is one deterministic pass.
class ClassifierHead {
 public:
  ClassifierHead(int hidden_size, double dropout_rate, int sample_count, Rng& init_rng);

  int hidden_size() const { return static_cast<int>(w1_.value.rows()); }
  double dropout_rate() const { return dropout_rate_; }
  int sample_count() const { return sample_count_; }

  // rng is required in train mode with a positive rate unless replay masks
  // are given; record, when set, receives the masks that were applied.
  Logits forward(const Vector& v, Mode mode, Rng* rng, HeadTrace* trace = nullptr,
                 const DropoutMasks* replay = nullptr, DropoutMasks* record = nullptr) const;

  // Accumulates parameter gradients; adds the input gradient into d_input.
  void backward(const HeadTrace& trace, const Logits& d_logits, Vector& d_input);

  std::vector<Parameter*> parameters();
  const Parameter& w1() const { return w1_; }
  const Parameter& w2() const { return w2_; }

 private:
  Parameter w1_, b1_, w2_, b2_;
  double dropout_rate_;
  int sample_count_;
};

struct HamamParts {
  LogitSet l_mean, l_max, l_entity;
  std::optional<LogitSet> l_masked;
};

// Dual-pass composition: an entity-visible pass pooled two ways, then an
// entity-masked pass over the same span, with final logits the average of
// the two. Both passes share backbone and head parameters. entity_masking
// false skips the masked pass (ablation), returning l_entity as final.
LogitSet hamam_forward(const Backbone& backbone, const ClassifierHead& head,
                       const TokenizedInput& input, Mode mode, Rng* rng,
                       bool entity_masking = true, HamamParts* parts = nullptr);

// Single pass over insert_sentiment_token(input), classifying the hidden
// vector at the [SENTIMENT] position.
LogitSet pooled_sentiment_forward(const Backbone& backbone, const ClassifierHead& head,
                                  const TokenizedInput& input, Mode mode, Rng* rng);

}  // namespace nesa
