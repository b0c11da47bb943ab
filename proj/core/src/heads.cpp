#include "nesa/heads.hpp"
#include <cmath>

#include "nesa/errors.hpp"
#include "nesa/tokenizer.hpp"

namespace nesa {

namespace {
void check_span(const HiddenStates& hidden, TokenSpan span) {
  require(span.begin < span.end, ErrorKind::contract, "pooling: empty span");
  require(span.end <= static_cast<std::size_t>(hidden.rows()), ErrorKind::contract,
          "pooling: span end " + std::to_string(span.end) + " exceeds row count " +
              std::to_string(hidden.rows()));
}
}  // namespace

PooledVector mean_pool(const HiddenStates& hidden, TokenSpan span) {
  check_span(hidden, span);
  const auto k = static_cast<Eigen::Index>(span.begin);
  const auto len = static_cast<Eigen::Index>(span.size());
  Vector v = hidden.middleRows(k, len).colwise().sum().transpose() / static_cast<double>(len);
  return {std::move(v), PoolKind::mean};
}

PooledVector max_pool(const HiddenStates& hidden, TokenSpan span) {
  check_span(hidden, span);
  const auto k = static_cast<Eigen::Index>(span.begin);
  const auto len = static_cast<Eigen::Index>(span.size());
  Vector v = hidden.middleRows(k, len).colwise().maxCoeff().transpose();
  return {std::move(v), PoolKind::max};
}

void mean_pool_backward(const Vector& d_pooled, TokenSpan span, Matrix& d_hidden) {
  const double inv = 1.0 / static_cast<double>(span.size());
  for (std::size_t i = span.begin; i < span.end; ++i) {
    d_hidden.row(static_cast<Eigen::Index>(i)) += d_pooled.transpose() * inv;
  }
}

void max_pool_backward(const Vector& d_pooled, const HiddenStates& hidden, TokenSpan span,
                       Matrix& d_hidden) {
  check_span(hidden, span);
  for (Eigen::Index c = 0; c < hidden.cols(); ++c) {
    Eigen::Index argmax = static_cast<Eigen::Index>(span.begin);
    double best = hidden(argmax, c);
    for (std::size_t i = span.begin + 1; i < span.end; ++i) {
      double val = hidden(static_cast<Eigen::Index>(i), c);
      if (val > best) {
        best = val;
        argmax = static_cast<Eigen::Index>(i);
      }
    }
    d_hidden(argmax, c) += d_pooled(c);
  }
}

ClassifierHead::ClassifierHead(int hidden_size, double dropout_rate, int sample_count,
                               Rng& init_rng)
    : w1_("head.W1", hidden_size, hidden_size, true),
      b1_("head.b1", hidden_size, 1, false),
      w2_("head.W2", kNumClasses, hidden_size, true),
      b2_("head.b2", kNumClasses, 1, false),
      dropout_rate_(dropout_rate),
      sample_count_(sample_count) {
  require(dropout_rate >= 0.0 && dropout_rate < 1.0, ErrorKind::config,
          "dropout_rate must lie in [0, 1)");
  require(sample_count >= 1, ErrorKind::config, "sample_count must be >= 1");
  // Glorot scale for the tanh layer keeps its pre-activations in the active
  // range; the output layer starts near zero so initial logits are flat.
  w1_.init_normal(init_rng, 1.0 / std::sqrt(static_cast<double>(hidden_size)));
  w2_.init_normal(init_rng, 0.02);
}

Logits ClassifierHead::forward(const Vector& v, Mode mode, Rng* rng, HeadTrace* trace,
                               const DropoutMasks* replay, DropoutMasks* record) const {
  require(v.size() == w1_.value.cols(), ErrorKind::contract,
          "classify: input size " + std::to_string(v.size()) + " does not match head size " +
              std::to_string(w1_.value.cols()));
  Vector h = (w1_.value * v + b1_.value.col(0)).array().tanh();

  const bool stochastic = (mode == Mode::train && dropout_rate_ > 0.0) || replay != nullptr;
  Logits z;
  DropoutMasks masks;
  if (!stochastic) {
    // Rate 0 and eval share this exact single pass.
    z = w2_.value * h + b2_.value.col(0);
  } else {
    const double keep = 1.0 - dropout_rate_;
    const double inv_keep = 1.0 / keep;
    int samples = replay ? static_cast<int>(replay->size()) : sample_count_;
    require(samples >= 1, ErrorKind::contract, "dropout replay needs at least one mask");
    require(replay != nullptr || rng != nullptr, ErrorKind::contract,
            "train-mode dropout needs a generator");
    z.setZero();
    masks.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
      Vector mask(h.size());
      if (replay) {
        mask = (*replay)[static_cast<std::size_t>(s)];
        require(mask.size() == h.size(), ErrorKind::contract, "replay mask size mismatch");
      } else {
        for (Eigen::Index i = 0; i < mask.size(); ++i) {
          mask(i) = rng->uniform() < keep ? inv_keep : 0.0;
        }
      }
      z += w2_.value * h.cwiseProduct(mask) + b2_.value.col(0);
      masks.push_back(std::move(mask));
    }
    z /= static_cast<double>(samples);
  }

  if (record) *record = masks;
  if (trace) {
    trace->input = v;
    trace->h = std::move(h);
    trace->masks = std::move(masks);
    trace->stochastic = stochastic;
  }
  return z;
}

void ClassifierHead::backward(const HeadTrace& trace, const Logits& d_logits, Vector& d_input) {
  Vector dh(trace.h.size());
  if (!trace.stochastic) {
    w2_.grad.noalias() += d_logits * trace.h.transpose();
    b2_.grad.col(0) += d_logits;
    dh.noalias() = w2_.value.transpose() * d_logits;
  } else {
    const auto samples = static_cast<double>(trace.masks.size());
    Vector mean_mask = Vector::Zero(trace.h.size());
    for (const Vector& mask : trace.masks) mean_mask += mask;
    mean_mask /= samples;
    w2_.grad.noalias() += d_logits * trace.h.cwiseProduct(mean_mask).transpose();
    b2_.grad.col(0) += d_logits;
    dh.noalias() = (w2_.value.transpose() * d_logits).cwiseProduct(mean_mask);
  }
  Vector dpre = dh.array() * (1.0 - trace.h.array().square());
  w1_.grad.noalias() += dpre * trace.input.transpose();
  b1_.grad.col(0) += dpre;
  d_input.noalias() += w1_.value.transpose() * dpre;
}

std::vector<Parameter*> ClassifierHead::parameters() { return {&w1_, &b1_, &w2_, &b2_}; }

LogitSet hamam_forward(const Backbone& backbone, const ClassifierHead& head,
                       const TokenizedInput& input, Mode mode, Rng* rng, bool entity_masking,
                       HamamParts* parts) {
  require(!input.is_masked, ErrorKind::contract, "hamam_forward: input is pre-masked");

  HiddenStates hidden = backbone.encode(input);
  Logits l_mean = head.forward(mean_pool(hidden, input.entity_span).v, mode, rng);
  Logits l_max = head.forward(max_pool(hidden, input.entity_span).v, mode, rng);
  Logits l_entity = (l_mean + l_max) / 2.0;

  Logits l_final;
  Logits l_masked;
  if (entity_masking) {
    HiddenStates masked_hidden = backbone.encode(mask_entity(input));
    Logits lm_mean = head.forward(mean_pool(masked_hidden, input.entity_span).v, mode, rng);
    Logits lm_max = head.forward(max_pool(masked_hidden, input.entity_span).v, mode, rng);
    l_masked = (lm_mean + lm_max) / 2.0;
    l_final = (l_entity + l_masked) / 2.0;
  } else {
    l_final = l_entity;
  }

  if (parts) {
    parts->l_mean = {l_mean, Provenance::mean};
    parts->l_max = {l_max, Provenance::max};
    parts->l_entity = {l_entity, Provenance::entity};
    if (entity_masking) {
      parts->l_masked = LogitSet{l_masked, Provenance::masked};
    } else {
      parts->l_masked.reset();
    }
  }
  return {l_final, Provenance::final_average};
}

LogitSet pooled_sentiment_forward(const Backbone& backbone, const ClassifierHead& head,
                                  const TokenizedInput& input, Mode mode, Rng* rng) {
  require(!input.is_masked, ErrorKind::contract, "pooled_sentiment_forward: input is masked");
  TokenizedInput marked = insert_sentiment_token(input);
  HiddenStates hidden = backbone.encode(marked);
  Vector at_marker = hidden.row(static_cast<Eigen::Index>(*marked.sentiment_pos)).transpose();
  Logits logits = head.forward(at_marker, mode, rng);
  return {logits, Provenance::final_average};
}

}  // namespace nesa
