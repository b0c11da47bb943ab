#include "nesa/model.hpp"

#include "nesa/errors.hpp"
#include "nesa/loss.hpp"

namespace nesa {

namespace {
constexpr std::uint64_t kInitStream = 0x1A17;
}

SentimentModel::SentimentModel(TrainConfig config, Vocabulary vocab,
                               const BackboneFactory& factory)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  config_.validate();
  Rng init_rng(derive_seed(config_.seed, kInitStream));
  if (factory) {
    encoder_ = factory(config_.encoder_config(), vocab_.size(), init_rng);
  } else {
    encoder_ = std::make_unique<ToyEncoder>(config_.encoder_config(), vocab_.size(), init_rng);
  }
  head_ = std::make_unique<ClassifierHead>(config_.hidden_size, config_.dropout_rate,
                                           config_.dropout_samples, init_rng);
}

SentimentModel SentimentModel::create(const TrainConfig& config, Vocabulary vocab,
                                      const BackboneFactory& factory) {
  return SentimentModel(config, std::move(vocab), factory);
}

TokenizedInput SentimentModel::prepare(const Record& record) const {
  return tokenize(vocab_, record.sentence, record.entity_span);
}

LogitSet SentimentModel::forward_eval(const TokenizedInput& input) const {
  if (config_.head_variant == HeadVariant::pooled_sentiment) {
    return pooled_sentiment_forward(*encoder_, *head_, input, Mode::eval, nullptr);
  }
  return hamam_forward(*encoder_, *head_, input, Mode::eval, nullptr, config_.entity_masking);
}

double SentimentModel::train_forward(const TokenizedInput& input, SentimentLabel gold,
                                     Mode mode, Rng* rng, bool accumulate_grads,
                                     double grad_scale,
                                     const std::vector<DropoutMasks>* replay,
                                     std::vector<DropoutMasks>* record, Logits* final_logits) {
  const Eigen::Index N = config_.hidden_size;
  auto replay_at = [&](std::size_t i) -> const DropoutMasks* {
    if (!replay) return nullptr;
    require(i < replay->size(), ErrorKind::contract, "missing replay masks for head call");
    return &(*replay)[i];
  };
  auto record_at = [&](std::size_t i) -> DropoutMasks* {
    if (!record) return nullptr;
    if (record->size() <= i) record->resize(i + 1);
    return &(*record)[i];
  };

  Logits l_final;
  double loss = 0.0;

  if (config_.head_variant == HeadVariant::pooled_sentiment) {
    require(!input.is_masked, ErrorKind::contract, "train_forward: input is masked");
    TokenizedInput marked = insert_sentiment_token(input);
    ToyEncoder::Trace trace;
    HiddenStates hidden =
        encoder_->forward(marked.token_ids, encoder_->default_mask(marked.token_ids),
                          accumulate_grads ? &trace : nullptr);
    const auto pos = static_cast<Eigen::Index>(*marked.sentiment_pos);
    Vector at_marker = hidden.row(pos).transpose();
    HeadTrace head_trace;
    l_final = head_->forward(at_marker, mode, rng, accumulate_grads ? &head_trace : nullptr,
                             replay_at(0), record_at(0));
    loss = weighted_cross_entropy(l_final, gold, config_.class_weights);
    if (accumulate_grads) {
      Logits d_final =
          grad_scale * weighted_cross_entropy_backward(l_final, gold, config_.class_weights);
      Vector d_marker = Vector::Zero(N);
      head_->backward(head_trace, d_final, d_marker);
      Matrix d_hidden = Matrix::Zero(hidden.rows(), N);
      d_hidden.row(pos) = d_marker.transpose();
      encoder_->backward(trace, d_hidden);
    }
  } else {
    require(!input.is_masked, ErrorKind::contract, "train_forward: input is pre-masked");
    const TokenSpan span = input.entity_span;

    ToyEncoder::Trace trace_plain;
    HiddenStates hidden =
        encoder_->forward(input.token_ids, encoder_->default_mask(input.token_ids),
                          accumulate_grads ? &trace_plain : nullptr);
    HeadTrace t_mean, t_max;
    Logits l_mean = head_->forward(mean_pool(hidden, span).v, mode, rng,
                                   accumulate_grads ? &t_mean : nullptr, replay_at(0),
                                   record_at(0));
    Logits l_max = head_->forward(max_pool(hidden, span).v, mode, rng,
                                  accumulate_grads ? &t_max : nullptr, replay_at(1),
                                  record_at(1));
    Logits l_entity = (l_mean + l_max) / 2.0;

    TokenizedInput masked;
    ToyEncoder::Trace trace_masked;
    HiddenStates masked_hidden;
    HeadTrace tm_mean, tm_max;
    if (config_.entity_masking) {
      masked = mask_entity(input);
      masked_hidden =
          encoder_->forward(masked.token_ids, encoder_->default_mask(masked.token_ids),
                            accumulate_grads ? &trace_masked : nullptr);
      Logits lm_mean = head_->forward(mean_pool(masked_hidden, span).v, mode, rng,
                                      accumulate_grads ? &tm_mean : nullptr, replay_at(2),
                                      record_at(2));
      Logits lm_max = head_->forward(max_pool(masked_hidden, span).v, mode, rng,
                                     accumulate_grads ? &tm_max : nullptr, replay_at(3),
                                     record_at(3));
      Logits l_masked = (lm_mean + lm_max) / 2.0;
      l_final = (l_entity + l_masked) / 2.0;
    } else {
      l_final = l_entity;
    }
    loss = weighted_cross_entropy(l_final, gold, config_.class_weights);

    if (accumulate_grads) {
      Logits d_final =
          grad_scale * weighted_cross_entropy_backward(l_final, gold, config_.class_weights);
      Logits d_entity = config_.entity_masking ? (d_final / 2.0).eval() : d_final;

      Matrix d_hidden = Matrix::Zero(hidden.rows(), N);
      Vector dv_mean = Vector::Zero(N);
      head_->backward(t_mean, d_entity / 2.0, dv_mean);
      mean_pool_backward(dv_mean, span, d_hidden);
      Vector dv_max = Vector::Zero(N);
      head_->backward(t_max, d_entity / 2.0, dv_max);
      max_pool_backward(dv_max, hidden, span, d_hidden);
      encoder_->backward(trace_plain, d_hidden);

      if (config_.entity_masking) {
        Logits d_masked = d_final / 2.0;
        Matrix d_masked_hidden = Matrix::Zero(masked_hidden.rows(), N);
        Vector dvm_mean = Vector::Zero(N);
        head_->backward(tm_mean, d_masked / 2.0, dvm_mean);
        mean_pool_backward(dvm_mean, span, d_masked_hidden);
        Vector dvm_max = Vector::Zero(N);
        head_->backward(tm_max, d_masked / 2.0, dvm_max);
        max_pool_backward(dvm_max, masked_hidden, span, d_masked_hidden);
        encoder_->backward(trace_masked, d_masked_hidden);
      }
    }
  }

  if (final_logits) *final_logits = l_final;
  return loss;
}

std::vector<Parameter*> SentimentModel::parameters() {
  std::vector<Parameter*> params = backbone_parameters();
  for (Parameter* p : head_parameters()) params.push_back(p);
  return params;
}

std::vector<Matrix> SentimentModel::snapshot_parameters() {
  std::vector<Matrix> snapshot;
  for (Parameter* p : parameters()) snapshot.push_back(p->value);
  return snapshot;
}

void SentimentModel::restore_parameters(const std::vector<Matrix>& snapshot) {
  std::vector<Parameter*> params = parameters();
  require(snapshot.size() == params.size(), ErrorKind::contract,
          "parameter snapshot size mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = snapshot[i];
}

}  // namespace nesa
