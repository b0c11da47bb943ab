#pragma once

#include "nesa/record.hpp"
#include "nesa/types.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace nesa {

struct ConfusionMatrix {
  // rows = gold, columns = predicted
  std::array<std::array<long long, kNumClasses>, kNumClasses> counts{};

  long long total() const;
  long long row_sum(int gold) const;
  long long col_sum(int pred) const;
};

ConfusionMatrix confusion(std::span<const SentimentLabel> golds,
                          std::span<const SentimentLabel> preds);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ClassMetrics class_metrics(const ConfusionMatrix& cm, int cls);

// Mean of F1(positive) and F1(negative) only, reported on a 0..100 scale.
// Neutral is excluded from the average but stays in the matrix, so it still
// affects the precision and recall of the scored classes. A class with a
// zero precision or recall denominator contributes F1 = 0.
double macro_f1_pn(const ConfusionMatrix& cm);

struct EvalMetrics {
  double macro_f1_pn = 0.0;
  std::array<ClassMetrics, kNumClasses> per_class;
  ConfusionMatrix cm;
};

EvalMetrics evaluate(std::span<const SentimentLabel> golds,
                     std::span<const SentimentLabel> preds);

std::string metrics_to_json(const EvalMetrics& metrics);

struct ErrorEntry {
  Record record;
  SentimentLabel gold;
  SentimentLabel pred;
  Eigen::Vector3d probs;
};

struct ErrorGroup {
  SentimentLabel gold;
  SentimentLabel pred;
  // Polarity flips (positive <-> negative) are flagged; they are rare and
  // usually trace back to ambiguous labels.
  bool polarity_flip = false;
  std::vector<ErrorEntry> entries;  // descending predicted-class probability
};

struct ErrorReport {
  long long scored = 0;
  long long errors = 0;
  std::vector<ErrorGroup> groups;  // descending count, ties by cell order
};

ErrorReport error_report(std::span<const Record> records,
                         std::span<const SentimentLabel> golds,
                         std::span<const SentimentLabel> preds,
                         std::span<const Eigen::Vector3d> probs);

std::string report_to_text(const ErrorReport& report);
std::string report_to_json(const ErrorReport& report);

}  // namespace nesa
