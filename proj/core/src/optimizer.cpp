#include "nesa/optimizer.hpp"

#include <cmath>

namespace nesa {

Optimizer::Optimizer(OptimizerKind kind, std::vector<Parameter*> params, double weight_decay)
    : kind_(kind), params_(std::move(params)), weight_decay_(weight_decay) {
  if (kind_ == OptimizerKind::adamw) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const Parameter* p : params_) {
      m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
      v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    }
  }
}

void Optimizer::step(double lr) {
  if (kind_ == OptimizerKind::sgd) {
    for (Parameter* p : params_) p->value -= lr * p->grad;
    return;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter* p = params_[i];
    m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * p->grad;
    v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * p->grad.cwiseProduct(p->grad);
    Matrix m_hat = m_[i] / bc1;
    Matrix v_hat = v_[i] / bc2;
    p->value -= lr * (m_hat.array() / (v_hat.array().sqrt() + kEps)).matrix();
    if (p->weight_decay && weight_decay_ > 0.0) {
      p->value -= lr * weight_decay_ * p->value;
    }
  }
}

}  // namespace nesa
