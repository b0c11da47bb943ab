#include "nesa/toy_encoder.hpp"

#include "nesa/errors.hpp"
#include "nesa/vocab.hpp"

#include <cmath>

namespace nesa {

namespace {
// Large negative score for masked keys; exp underflows to exactly zero after
// max subtraction as long as one attended key exists.
constexpr double kMaskScore = -1e30;
}  // namespace

void EncoderConfig::validate() const {
  require(hidden_size > 0 && num_layers > 0 && num_heads > 0 && ff_size > 0 && max_seq_len > 0,
          ErrorKind::config, "encoder dimensions must be positive");
  require(hidden_size % num_heads == 0, ErrorKind::config,
          "hidden_size must be divisible by num_heads");
  require(init_std > 0.0, ErrorKind::config, "init_std must be positive");
}

ToyEncoder::Layer::Layer(int index, int hidden, int ff)
    : wq("encoder.layer" + std::to_string(index) + ".attn.wq", hidden, hidden, true),
      bq("encoder.layer" + std::to_string(index) + ".attn.bq", hidden, 1, false),
      wk("encoder.layer" + std::to_string(index) + ".attn.wk", hidden, hidden, true),
      bk("encoder.layer" + std::to_string(index) + ".attn.bk", hidden, 1, false),
      wv("encoder.layer" + std::to_string(index) + ".attn.wv", hidden, hidden, true),
      bv("encoder.layer" + std::to_string(index) + ".attn.bv", hidden, 1, false),
      wo("encoder.layer" + std::to_string(index) + ".attn.wo", hidden, hidden, true),
      bo("encoder.layer" + std::to_string(index) + ".attn.bo", hidden, 1, false),
      ln1_gamma("encoder.layer" + std::to_string(index) + ".ln1.gamma", hidden, 1, false),
      ln1_beta("encoder.layer" + std::to_string(index) + ".ln1.beta", hidden, 1, false),
      wff1("encoder.layer" + std::to_string(index) + ".ffn.w1", ff, hidden, true),
      bff1("encoder.layer" + std::to_string(index) + ".ffn.b1", ff, 1, false),
      wff2("encoder.layer" + std::to_string(index) + ".ffn.w2", hidden, ff, true),
      bff2("encoder.layer" + std::to_string(index) + ".ffn.b2", hidden, 1, false),
      ln2_gamma("encoder.layer" + std::to_string(index) + ".ln2.gamma", hidden, 1, false),
      ln2_beta("encoder.layer" + std::to_string(index) + ".ln2.beta", hidden, 1, false) {}

ToyEncoder::ToyEncoder(const EncoderConfig& config, int vocab_size, Rng& init_rng)
    : config_(config),
      vocab_size_(vocab_size),
      tok_embedding_("encoder.tok_embedding", vocab_size, config.hidden_size, true),
      pos_embedding_("encoder.pos_embedding", config.max_seq_len, config.hidden_size, true),
      mlm_bias_("encoder.mlm_bias", vocab_size, 1, false) {
  config_.validate();
  require(vocab_size > Vocabulary::kNumSpecials, ErrorKind::config,
          "vocabulary must contain at least one regular token");
  tok_embedding_.init_normal(init_rng, config_.init_std);
  pos_embedding_.init_normal(init_rng, config_.init_std);
  layers_.reserve(static_cast<std::size_t>(config_.num_layers));
  for (int l = 0; l < config_.num_layers; ++l) {
    layers_.emplace_back(l, config_.hidden_size, config_.ff_size);
    Layer& layer = layers_.back();
    for (Parameter* w : {&layer.wq, &layer.wk, &layer.wv, &layer.wo, &layer.wff1, &layer.wff2}) {
      w->init_normal(init_rng, config_.init_std);
    }
    layer.ln1_gamma.value.setOnes();
    layer.ln2_gamma.value.setOnes();
  }
}

std::vector<bool> ToyEncoder::default_mask(const std::vector<int>& token_ids) const {
  std::vector<bool> attended(token_ids.size());
  for (std::size_t i = 0; i < token_ids.size(); ++i) {
    attended[i] = token_ids[i] != Vocabulary::kPad;
  }
  return attended;
}

HiddenStates ToyEncoder::forward(const std::vector<int>& token_ids,
                                 const std::vector<bool>& attended, Trace* trace) const {
  const Eigen::Index n = static_cast<Eigen::Index>(token_ids.size());
  const int N = config_.hidden_size;
  const int H = config_.num_heads;
  const int d = N / H;
  require(n > 0, ErrorKind::contract, "encode: empty input");
  require(n <= config_.max_seq_len, ErrorKind::contract,
          "sequence length " + std::to_string(n) + " exceeds max_seq_len " +
              std::to_string(config_.max_seq_len));
  require(attended.size() == token_ids.size(), ErrorKind::contract,
          "attention mask length mismatch");
  bool any_attended = false;
  for (std::size_t i = 0; i < token_ids.size(); ++i) {
    int id = token_ids[i];
    require(id >= 0 && id < vocab_size_, ErrorKind::vocabulary,
            "token id " + std::to_string(id) + " outside vocabulary of size " +
                std::to_string(vocab_size_));
    any_attended = any_attended || attended[i];
  }
  require(any_attended, ErrorKind::contract, "encode: all positions masked");

  Matrix x(n, N);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = tok_embedding_.value.row(token_ids[static_cast<std::size_t>(i)]) +
               pos_embedding_.value.row(i);
  }
  if (trace) {
    trace->token_ids = token_ids;
    trace->attended = attended;
    trace->x0 = x;
    trace->layers.clear();
    trace->layers.resize(layers_.size());
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& layer = layers_[li];
    LayerTrace* lt = trace ? &trace->layers[li] : nullptr;
    if (lt) lt->x_in = x;

    Matrix q = linear_forward(x, layer.wq.value, layer.bq.value);
    Matrix k = linear_forward(x, layer.wk.value, layer.bk.value);
    Matrix v = linear_forward(x, layer.wv.value, layer.bv.value);

    Matrix concat(n, N);
    std::vector<Matrix> attn_mats;
    if (lt) attn_mats.resize(static_cast<std::size_t>(H));
    for (int h = 0; h < H; ++h) {
      auto qh = q.middleCols(h * d, d);
      auto kh = k.middleCols(h * d, d);
      auto vh = v.middleCols(h * d, d);
      Matrix scores = (qh * kh.transpose()) * scale;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!attended[static_cast<std::size_t>(j)]) scores.col(j).setConstant(kMaskScore);
      }
      Matrix a = softmax_rows(scores);
      concat.middleCols(h * d, d) = a * vh;
      if (lt) attn_mats[static_cast<std::size_t>(h)] = std::move(a);
    }
    Matrix attn_out = linear_forward(concat, layer.wo.value, layer.bo.value);

    Matrix r1 = x + attn_out;
    Matrix x1 = layer_norm_forward(r1, layer.ln1_gamma.value, layer.ln1_beta.value,
                                   lt ? &lt->ln1 : nullptr);

    Matrix ff_pre = linear_forward(x1, layer.wff1.value, layer.bff1.value);
    Matrix ff_act = gelu(ff_pre);
    Matrix ff_out = linear_forward(ff_act, layer.wff2.value, layer.bff2.value);

    Matrix r2 = x1 + ff_out;
    Matrix x2 = layer_norm_forward(r2, layer.ln2_gamma.value, layer.ln2_beta.value,
                                   lt ? &lt->ln2 : nullptr);

    if (lt) {
      lt->q = std::move(q);
      lt->k = std::move(k);
      lt->v = std::move(v);
      lt->attn = std::move(attn_mats);
      lt->concat = std::move(concat);
      lt->r1 = std::move(r1);
      lt->x1 = x1;
      lt->ff_pre = std::move(ff_pre);
      lt->ff_act = std::move(ff_act);
      lt->r2 = std::move(r2);
    }
    x = std::move(x2);
  }
  return x;
}

void ToyEncoder::backward(const Trace& trace, const Matrix& d_hidden) {
  const Eigen::Index n = d_hidden.rows();
  const int N = config_.hidden_size;
  const int H = config_.num_heads;
  const int d = N / H;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  Matrix dx = d_hidden;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    Layer& layer = layers_[li];
    const LayerTrace& lt = trace.layers[li];

    // ln2 and the second residual
    Matrix dr2 = layer_norm_backward(dx, lt.ln2, layer.ln2_gamma.value, layer.ln2_gamma.grad,
                                     layer.ln2_beta.grad);
    Matrix dx1 = dr2;
    // ffn
    Matrix dff_act = linear_backward(dr2, lt.ff_act, layer.wff2.value, layer.wff2.grad,
                                     layer.bff2.grad);
    Matrix dff_pre = gelu_backward(dff_act, lt.ff_pre);
    dx1 += linear_backward(dff_pre, lt.x1, layer.wff1.value, layer.wff1.grad, layer.bff1.grad);

    // ln1 and the first residual
    Matrix dr1 = layer_norm_backward(dx1, lt.ln1, layer.ln1_gamma.value, layer.ln1_gamma.grad,
                                     layer.ln1_beta.grad);
    Matrix dx_in = dr1;
    // attention output projection
    Matrix dconcat = linear_backward(dr1, lt.concat, layer.wo.value, layer.wo.grad,
                                     layer.bo.grad);

    Matrix dq = Matrix::Zero(n, N);
    Matrix dk = Matrix::Zero(n, N);
    Matrix dv = Matrix::Zero(n, N);
    for (int h = 0; h < H; ++h) {
      auto qh = lt.q.middleCols(h * d, d);
      auto kh = lt.k.middleCols(h * d, d);
      auto vh = lt.v.middleCols(h * d, d);
      const Matrix& a = lt.attn[static_cast<std::size_t>(h)];
      Matrix do_h = dconcat.middleCols(h * d, d);
      Matrix da = do_h * vh.transpose();
      dv.middleCols(h * d, d) = a.transpose() * do_h;
      Matrix dscores = softmax_rows_backward(da, a);
      dq.middleCols(h * d, d) = (dscores * kh) * scale;
      dk.middleCols(h * d, d) = (dscores.transpose() * qh) * scale;
    }
    dx_in += linear_backward(dq, lt.x_in, layer.wq.value, layer.wq.grad, layer.bq.grad);
    dx_in += linear_backward(dk, lt.x_in, layer.wk.value, layer.wk.grad, layer.bk.grad);
    dx_in += linear_backward(dv, lt.x_in, layer.wv.value, layer.wv.grad, layer.bv.grad);

    dx = std::move(dx_in);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    tok_embedding_.grad.row(trace.token_ids[static_cast<std::size_t>(i)]) += dx.row(i);
    pos_embedding_.grad.row(i) += dx.row(i);
  }
}

HiddenStates ToyEncoder::encode(const TokenizedInput& input) const {
  return forward(input.token_ids, default_mask(input.token_ids), nullptr);
}

HiddenStates ToyEncoder::encode_with_mask(const TokenizedInput& input,
                                          const std::vector<bool>& attended) const {
  return forward(input.token_ids, attended, nullptr);
}

Matrix ToyEncoder::mlm_logits(const HiddenStates& hidden) const {
  Matrix logits = hidden * tok_embedding_.value.transpose();
  logits.rowwise() += mlm_bias_.value.col(0).transpose();
  return logits;
}

Vector ToyEncoder::mlm_distribution(const TokenizedInput& input, std::size_t position) const {
  require(position < input.token_ids.size(), ErrorKind::contract,
          "mlm_distribution: position out of range");
  HiddenStates hidden = encode(input);
  Vector logits = mlm_logits(hidden).row(static_cast<Eigen::Index>(position)).transpose();
  return softmax_vec(logits);
}

Matrix ToyEncoder::mlm_logits_backward(const Matrix& d_logits, const HiddenStates& hidden) {
  tok_embedding_.grad.noalias() += d_logits.transpose() * hidden;
  mlm_bias_.grad.col(0).noalias() += d_logits.colwise().sum().transpose();
  return d_logits * tok_embedding_.value;
}

std::vector<Parameter*> ToyEncoder::parameters() {
  std::vector<Parameter*> params{&tok_embedding_, &pos_embedding_, &mlm_bias_};
  for (Layer& layer : layers_) {
    for (Parameter* p : {&layer.wq, &layer.bq, &layer.wk, &layer.bk, &layer.wv, &layer.bv,
                         &layer.wo, &layer.bo, &layer.ln1_gamma, &layer.ln1_beta, &layer.wff1,
                         &layer.bff1, &layer.wff2, &layer.bff2, &layer.ln2_gamma,
                         &layer.ln2_beta}) {
      params.push_back(p);
    }
  }
  return params;
}

}  // namespace nesa
