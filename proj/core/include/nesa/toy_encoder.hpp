#pragma once

#include "nesa/backbone.hpp"

#include <memory>
#include <vector>

namespace nesa {

struct EncoderConfig {
  int hidden_size = 64;
  int num_layers = 2;
  int num_heads = 4;
  int ff_size = 256;
  int max_seq_len = 128;
  double init_std = 0.15;

  void validate() const;
};

// Reference trainable encoder: BERT-style post-LN transformer with learned
// positional embeddings and a tied-embedding MLM head. Small enough for
// finite-difference checks; no dropout inside the encoder, so forward values
// are mode-independent.
class ToyEncoder : public Backbone {
 public:
  ToyEncoder(const EncoderConfig& config, int vocab_size, Rng& init_rng);

  int hidden_size() const override { return config_.hidden_size; }
  int vocab_size() const override { return vocab_size_; }
  const EncoderConfig& config() const { return config_; }

  struct LayerTrace {
    Matrix x_in;                  // input to the layer
    Matrix q, k, v;               // projections, n x N
    std::vector<Matrix> attn;     // per-head softmax matrices, n x n
    Matrix concat;                // concatenated head outputs, n x N
    Matrix r1;                    // x_in + attention output
    LayerNormTrace ln1;
    Matrix x1;                    // ln1 output
    Matrix ff_pre;                // x1 W1^T + b1 before activation
    Matrix ff_act;                // gelu(ff_pre)
    Matrix r2;                    // x1 + ffn output
    LayerNormTrace ln2;
  };

  struct Trace {
    std::vector<int> token_ids;
    std::vector<bool> attended;
    Matrix x0;  // embeddings
    std::vector<LayerTrace> layers;
  };

  // Keys at non-attended positions are excluded from every attention row.
  // Default mask attends everything except [PAD].
  HiddenStates forward(const std::vector<int>& token_ids, const std::vector<bool>& attended,
                       Trace* trace) const;

  // Accumulates parameter gradients and returns nothing; d_hidden is the
  // loss gradient w.r.t. the returned hidden states.
  void backward(const Trace& trace, const Matrix& d_hidden);

  HiddenStates encode(const TokenizedInput& input) const override;

  // Explicit-mask variant used by the padding-invariance checks.
  HiddenStates encode_with_mask(const TokenizedInput& input,
                                const std::vector<bool>& attended) const;

  // Tied-embedding MLM head: logits = H E^T + b.
  Matrix mlm_logits(const HiddenStates& hidden) const;
  Vector mlm_distribution(const TokenizedInput& input, std::size_t position) const override;

  // Backward through the MLM head: accumulates grads for the tied embedding
  // and bias, returns d_hidden for the encoder backward.
  Matrix mlm_logits_backward(const Matrix& d_logits, const HiddenStates& hidden);

  std::vector<Parameter*> parameters() override;

  std::vector<bool> default_mask(const std::vector<int>& token_ids) const;

 private:
  struct Layer {
    Parameter wq, bq, wk, bk, wv, bv, wo, bo;
    Parameter ln1_gamma, ln1_beta;
    Parameter wff1, bff1, wff2, bff2;
    Parameter ln2_gamma, ln2_beta;

    Layer(int index, int hidden, int ff);
  };

  EncoderConfig config_;
  int vocab_size_;
  Parameter tok_embedding_;  // V x N, tied with the MLM output
  Parameter pos_embedding_;  // max_seq_len x N
  Parameter mlm_bias_;       // V x 1
  std::vector<Layer> layers_;
};

}  // namespace nesa
