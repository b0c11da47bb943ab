#pragma once

#include "nesa/errors.hpp"
#include "nesa/evaluation.hpp"
#include "nesa/model.hpp"
#include "nesa/types.hpp"

#include <functional>
#include <string>
#include <vector>

// Independent reference implementations for the oracle-first checks. These
// deliberately use plain loops and must stay decoupled from the library's
// compute paths.
namespace oracles {

// Loop-based mean over rows [k, m).
nesa::Vector loop_mean_pool(const nesa::Matrix& hidden, std::size_t k, std::size_t m);

// Loop-based elementwise max over rows [k, m).
nesa::Vector loop_max_pool(const nesa::Matrix& hidden, std::size_t k, std::size_t m);

// Loop-based componentwise mean of a list of 3-vectors.
nesa::Logits loop_mean_logits(const std::vector<nesa::Logits>& members);

// Scripted precision/recall computation over a confusion matrix, written
// directly from the definitions.
double scripted_macro_f1_pn(const nesa::ConfusionMatrix& cm);

// Central finite differences of a scalar function with respect to every
// entry of the given parameters. Returns the largest relative error against
// the already-accumulated analytic gradients.
struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_parameter;
};

GradCheckResult finite_difference_check(const std::vector<nesa::Parameter*>& params,
                                        const std::function<double()>& loss_fn,
                                        double epsilon = 1e-5);

// Relative error with a floor, |a - b| / max(|a| + |b|, floor). The floor
// keeps finite-difference roundoff on near-zero gradients from reading as
// relative error.
double rel_error(double a, double b, double floor = 1e-3);

inline bool values_equal(const nesa::Matrix& a, const nesa::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() == 0.0;
}

// True when fn throws an Error of the given kind whose message mentions the
// needle.
template <typename Fn>
bool throws_with(Fn&& fn, nesa::ErrorKind kind, const std::string& needle) {
  try {
    fn();
  } catch (const nesa::Error& e) {
    return e.kind() == kind && std::string(e.what()).find(needle) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}

}  // namespace oracles
