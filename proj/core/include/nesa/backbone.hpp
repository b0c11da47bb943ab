#pragma once

#include "nesa/nn.hpp"
#include "nesa/tokenizer.hpp"
#include "nesa/types.hpp"

#include <vector>

namespace nesa {

// Pluggable encoder contract: any transformer-style model can sit behind it.
// encode is read-only with respect to parameters and deterministic.
class Backbone {
 public:
  virtual ~Backbone() = default;

  virtual int hidden_size() const = 0;
  virtual int vocab_size() const = 0;

  // One row per token, hidden_size columns.
  virtual HiddenStates encode(const TokenizedInput& input) const = 0;

  // Probability distribution over the vocabulary for the token at `position`.
  virtual Vector mlm_distribution(const TokenizedInput& input, std::size_t position) const = 0;

  virtual std::vector<Parameter*> parameters() = 0;
};

}  // namespace nesa
