#pragma once

#include "nesa/rng.hpp"
#include "nesa/types.hpp"

#include <string>
#include <vector>

namespace nesa {

// A named trainable array. Vectors are stored as n x 1 so the optimizer is
// uniform. weight_decay marks genuine weight matrices; biases, layer-norm
// scales and shifts are excluded.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool weight_decay = false;

  Parameter(std::string name_, Eigen::Index rows, Eigen::Index cols, bool decay)
      : name(std::move(name_)),
        value(Matrix::Zero(rows, cols)),
        grad(Matrix::Zero(rows, cols)),
        weight_decay(decay) {}

  void zero_grad() { grad.setZero(); }
  void init_normal(Rng& rng, double stddev);
};

double global_grad_norm(const std::vector<Parameter*>& params);
void scale_grads(const std::vector<Parameter*>& params, double factor);
void zero_grads(const std::vector<Parameter*>& params);

// y = x W^T + b for row-major activations: x is n x in, W is out x in,
// b is out x 1, y is n x out.
Matrix linear_forward(const Matrix& x, const Matrix& w, const Matrix& b);

// Accumulates dW, db and returns dx.
Matrix linear_backward(const Matrix& dy, const Matrix& x, const Matrix& w, Matrix& dw,
                       Matrix& db);

struct LayerNormTrace {
  Matrix x_hat;  // normalized rows
  Vector rstd;   // per-row 1/sqrt(var + eps)
};

inline constexpr double kLayerNormEps = 1e-5;

Matrix layer_norm_forward(const Matrix& x, const Matrix& gamma, const Matrix& beta,
                          LayerNormTrace* trace);

Matrix layer_norm_backward(const Matrix& dy, const LayerNormTrace& trace, const Matrix& gamma,
                           Matrix& dgamma, Matrix& dbeta);

// Row-wise softmax with max subtraction; safe for large magnitudes.
Matrix softmax_rows(const Matrix& scores);
Vector softmax_vec(const Vector& logits);

// Given dA and A = softmax_rows(scores), returns dScores.
Matrix softmax_rows_backward(const Matrix& da, const Matrix& a);

// Exact GELU, 0.5 x (1 + erf(x / sqrt 2)).
Matrix gelu(const Matrix& x);
Matrix gelu_backward(const Matrix& dy, const Matrix& x);

double log_sum_exp(const Vector& v);

}  // namespace nesa
