#include "nesa/decision.hpp"

#include "nesa/errors.hpp"
#include "nesa/nn.hpp"

namespace nesa {

Eigen::Vector3d softmax3(const Logits& logits) {
  require(logits.allFinite(), ErrorKind::contract, "softmax: non-finite logits");
  return softmax_vec(logits);
}

namespace {
// First index with the maximal value; class order breaks ties.
int argmax3(const Eigen::Vector3d& v, int from = 0, int to = kNumClasses) {
  int best = from;
  for (int i = from + 1; i < to; ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}
}  // namespace

SentimentLabel decide(const Eigen::Vector3d& probs, const DecisionConfig& config) {
  int top = argmax3(probs);
  if (config.neutral_threshold && top == label_index(SentimentLabel::neutral) &&
      probs(top) < *config.neutral_threshold) {
    return label_from_index(argmax3(probs, 0, 2));
  }
  return label_from_index(top);
}

LogitSet ensemble_logits(const std::vector<LogitSet>& members) {
  require(!members.empty(), ErrorKind::contract, "ensemble_logits: empty member list");
  Logits sum = Logits::Zero();
  for (const LogitSet& m : members) sum += m.values;
  return {sum / static_cast<double>(members.size()), Provenance::ensemble};
}

Prediction predict(const std::vector<const Checkpoint*>& checkpoints, const Record& record,
                   const DecisionConfig& config) {
  require(!checkpoints.empty(), ErrorKind::contract, "predict: no checkpoints");
  Prediction pred;
  std::vector<LogitSet> finals;
  finals.reserve(checkpoints.size());
  for (const Checkpoint* ckpt : checkpoints) {
    TokenizedInput input = ckpt->model.prepare(record);
    LogitSet logits = ckpt->model.forward_eval(input);
    pred.per_model.push_back(logits.values);
    finals.push_back(logits);
  }
  LogitSet combined = ensemble_logits(finals);
  pred.probs = softmax3(combined.values);
  pred.label = decide(pred.probs, config);
  return pred;
}

}  // namespace nesa
