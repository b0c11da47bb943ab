#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>

namespace nesa {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Logits = Eigen::Vector3d;

// Per-token encoder outputs, one row per token, hidden_size columns.
using HiddenStates = Eigen::MatrixXd;

// Class index order is fixed and used for tie-breaking everywhere.
enum class SentimentLabel : int { positive = 0, negative = 1, neutral = 2 };

inline constexpr int kNumClasses = 3;

const char* to_string(SentimentLabel label);
SentimentLabel label_from_string(const std::string& name);

inline SentimentLabel label_from_index(int index) { return static_cast<SentimentLabel>(index); }
inline int label_index(SentimentLabel label) { return static_cast<int>(label); }

// Half-open span of Unicode code points into a sentence.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const CharSpan&) const = default;
};

// Half-open span of token indices.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const TokenSpan&) const = default;
};

enum class Provenance { mean, max, entity, masked, final_average, ensemble };

struct LogitSet {
  Logits values = Logits::Zero();
  Provenance provenance = Provenance::final_average;
};

}  // namespace nesa
