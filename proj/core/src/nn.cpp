#include "nesa/nn.hpp"

#include "nesa/errors.hpp"

#include <cmath>
#include <numbers>

namespace nesa {

void Parameter::init_normal(Rng& rng, double stddev) {
  for (Eigen::Index j = 0; j < value.cols(); ++j) {
    for (Eigen::Index i = 0; i < value.rows(); ++i) {
      value(i, j) = rng.normal(0.0, stddev);
    }
  }
}

double global_grad_norm(const std::vector<Parameter*>& params) {
  double sq = 0.0;
  for (const Parameter* p : params) sq += p->grad.squaredNorm();
  return std::sqrt(sq);
}

void scale_grads(const std::vector<Parameter*>& params, double factor) {
  for (Parameter* p : params) p->grad *= factor;
}

void zero_grads(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) p->zero_grad();
}

Matrix linear_forward(const Matrix& x, const Matrix& w, const Matrix& b) {
  require(x.cols() == w.cols(), ErrorKind::contract, "linear_forward: dimension mismatch");
  Matrix y = x * w.transpose();
  y.rowwise() += b.col(0).transpose();
  return y;
}

Matrix linear_backward(const Matrix& dy, const Matrix& x, const Matrix& w, Matrix& dw,
                       Matrix& db) {
  dw.noalias() += dy.transpose() * x;
  db.col(0).noalias() += dy.colwise().sum().transpose();
  return dy * w;
}

Matrix layer_norm_forward(const Matrix& x, const Matrix& gamma, const Matrix& beta,
                          LayerNormTrace* trace) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Matrix x_hat(n, d);
  Vector rstd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double mean = x.row(i).mean();
    double var = (x.row(i).array() - mean).square().sum() / static_cast<double>(d);
    double r = 1.0 / std::sqrt(var + kLayerNormEps);
    x_hat.row(i) = (x.row(i).array() - mean) * r;
    rstd(i) = r;
  }
  Matrix y = x_hat.array().rowwise() * gamma.col(0).transpose().array();
  y.rowwise() += beta.col(0).transpose();
  if (trace) {
    trace->x_hat = std::move(x_hat);
    trace->rstd = std::move(rstd);
  }
  return y;
}

Matrix layer_norm_backward(const Matrix& dy, const LayerNormTrace& trace, const Matrix& gamma,
                           Matrix& dgamma, Matrix& dbeta) {
  const Eigen::Index n = dy.rows();
  const Eigen::Index d = dy.cols();
  dgamma.col(0).noalias() += (dy.array() * trace.x_hat.array()).colwise().sum().matrix().transpose();
  dbeta.col(0).noalias() += dy.colwise().sum().transpose();

  Matrix dx(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::ArrayXd dxhat = dy.row(i).transpose().array() * gamma.col(0).array();
    double mean_dxhat = dxhat.mean();
    double mean_dxhat_xhat = (dxhat * trace.x_hat.row(i).transpose().array()).mean();
    dx.row(i) = (trace.rstd(i) *
                 (dxhat - mean_dxhat - trace.x_hat.row(i).transpose().array() * mean_dxhat_xhat))
                    .matrix()
                    .transpose();
  }
  return dx;
}

Matrix softmax_rows(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    double mx = scores.row(i).maxCoeff();
    Eigen::ArrayXd e = (scores.row(i).array() - mx).exp();
    out.row(i) = (e / e.sum()).matrix();
  }
  return out;
}

Vector softmax_vec(const Vector& logits) {
  double mx = logits.maxCoeff();
  Eigen::ArrayXd e = (logits.array() - mx).exp();
  return (e / e.sum()).matrix();
}

Matrix softmax_rows_backward(const Matrix& da, const Matrix& a) {
  Matrix ds(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double dot = a.row(i).dot(da.row(i));
    ds.row(i) = a.row(i).array() * (da.row(i).array() - dot);
  }
  return ds;
}

namespace {
inline double gelu_scalar(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

inline double gelu_grad_scalar(double x) {
  double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}
}  // namespace

Matrix gelu(const Matrix& x) { return x.unaryExpr(&gelu_scalar); }

Matrix gelu_backward(const Matrix& dy, const Matrix& x) {
  return dy.cwiseProduct(x.unaryExpr(&gelu_grad_scalar));
}

double log_sum_exp(const Vector& v) {
  double mx = v.maxCoeff();
  return mx + std::log((v.array() - mx).exp().sum());
}

}  // namespace nesa
