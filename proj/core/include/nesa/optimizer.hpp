#pragma once

#include "nesa/nn.hpp"
#include "nesa/train_config.hpp"

#include <vector>

namespace nesa {

// Two-group optimizer over named parameters. adamw applies decoupled weight
// decay to parameters flagged weight_decay; sgd is plain theta -= lr * grad
// with no decay (it exists for the weight-scaling equivalence property).
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::vector<Parameter*> params, double weight_decay);

  // lr applies to every parameter in this optimizer's group.
  void step(double lr);

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

 private:
  OptimizerKind kind_;
  std::vector<Parameter*> params_;
  double weight_decay_;
  long long t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

}  // namespace nesa
