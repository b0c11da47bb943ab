#pragma once

#include "nesa/types.hpp"

namespace nesa {

// class_weights[gold] * (-log softmax(logits)[gold]), overflow-safe via
// log-sum-exp. Batch loss is the unweighted arithmetic mean of these.
double weighted_cross_entropy(const Logits& logits, SentimentLabel gold,
                              const Logits& class_weights);

// d loss / d logits for the same expression.
Logits weighted_cross_entropy_backward(const Logits& logits, SentimentLabel gold,
                                       const Logits& class_weights);

}  // namespace nesa
