#include "nesa/loss.hpp"

#include "nesa/errors.hpp"
#include "nesa/nn.hpp"

namespace nesa {

double weighted_cross_entropy(const Logits& logits, SentimentLabel gold,
                              const Logits& class_weights) {
  require(logits.allFinite(), ErrorKind::numeric, "loss: non-finite logits");
  const int g = label_index(gold);
  double lse = log_sum_exp(logits);
  return class_weights(g) * (lse - logits(g));
}

Logits weighted_cross_entropy_backward(const Logits& logits, SentimentLabel gold,
                                       const Logits& class_weights) {
  const int g = label_index(gold);
  Logits grad = softmax_vec(logits);
  grad(g) -= 1.0;
  return class_weights(g) * grad;
}

}  // namespace nesa
