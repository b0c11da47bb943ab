#include "nesa/trainer.hpp"

#include "nesa/decision.hpp"
#include "nesa/errors.hpp"
#include "nesa/evaluation.hpp"
#include "nesa/optimizer.hpp"
#include "nesa/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

namespace nesa {

namespace {

constexpr std::uint64_t kShuffleStream = 0x5F0F;
constexpr std::uint64_t kDropoutStream = 0xD909;

void check_training_inputs(const std::vector<Record>& train_records,
                           const std::vector<Record>& val_records) {
  require(!train_records.empty(), ErrorKind::validation, "empty training set");
  require(!val_records.empty(), ErrorKind::validation, "empty validation set");
  std::set<std::string> train_ids;
  std::array<long long, kNumClasses> counts{};
  for (const Record& rec : train_records) {
    require(rec.label.has_value(), ErrorKind::validation,
            "unlabeled training record '" + rec.id + "'");
    counts[static_cast<std::size_t>(label_index(*rec.label))] += 1;
    train_ids.insert(rec.id);
  }
  for (int c = 0; c < kNumClasses; ++c) {
    require(counts[static_cast<std::size_t>(c)] > 0, ErrorKind::validation,
            std::string("training stratum '") + to_string(label_from_index(c)) + "' is empty");
  }
  for (const Record& rec : val_records) {
    require(rec.label.has_value(), ErrorKind::validation,
            "unlabeled validation record '" + rec.id + "'");
    require(train_ids.find(rec.id) == train_ids.end(), ErrorKind::validation,
            "record '" + rec.id + "' appears in both train and validation");
  }
}

}  // namespace

std::vector<long long> validation_schedule(long long steps_per_epoch, int epochs) {
  // Half-epoch marks at floor(E/2) * j; the final step is always evaluated
  // and coincides with the last mark when E is even.
  std::set<long long> marks;
  const long long total = steps_per_epoch * epochs;
  const long long half = steps_per_epoch / 2;
  if (half > 0) {
    for (int j = 1; j <= 2 * epochs; ++j) marks.insert(half * j);
  }
  marks.insert(total);
  return {marks.begin(), marks.end()};
}

double validation_macro_f1_pn(const SentimentModel& model, const std::vector<Record>& records,
                              const std::vector<TokenizedInput>& inputs, int jobs) {
  require(records.size() == inputs.size(), ErrorKind::contract,
          "validation inputs out of step with records");
  std::vector<SentimentLabel> golds(records.size());
  std::vector<SentimentLabel> preds(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) golds[i] = *records[i].label;

  auto score_range = [&](std::size_t begin, std::size_t end) {
    DecisionConfig plain_argmax;
    for (std::size_t i = begin; i < end; ++i) {
      LogitSet logits = model.forward_eval(inputs[i]);
      preds[i] = decide(softmax3(logits.values), plain_argmax);
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(records.size())));
  if (workers == 1) {
    score_range(0, records.size());
  } else {
    // Fixed index ranges; each worker writes disjoint slots, so the
    // reduction order is independent of scheduling.
    std::vector<std::thread> pool;
    const std::size_t chunk = (records.size() + static_cast<std::size_t>(workers) - 1) /
                              static_cast<std::size_t>(workers);
    for (int w = 0; w < workers; ++w) {
      std::size_t begin = static_cast<std::size_t>(w) * chunk;
      std::size_t end = std::min(records.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(score_range, begin, end);
    }
    for (std::thread& t : pool) t.join();
  }
  return macro_f1_pn(confusion(golds, preds));
}

TrainResult train_fold(const TrainConfig& config, const Vocabulary& vocab,
                       const std::vector<Record>& train_records,
                       const std::vector<Record>& val_records, const BackboneFactory& factory,
                       std::ostream* log_stream, int jobs) {
  config.validate();
  check_training_inputs(train_records, val_records);

  SentimentModel model = SentimentModel::create(config, vocab, factory);

  std::vector<TokenizedInput> train_inputs;
  train_inputs.reserve(train_records.size());
  for (const Record& rec : train_records) train_inputs.push_back(model.prepare(rec));
  std::vector<TokenizedInput> val_inputs;
  val_inputs.reserve(val_records.size());
  for (const Record& rec : val_records) val_inputs.push_back(model.prepare(rec));

  const long long n_train = static_cast<long long>(train_records.size());
  const long long steps_per_epoch = (n_train + config.batch_size - 1) / config.batch_size;
  const long long total_steps = steps_per_epoch * config.epochs;
  require(total_steps >= 10, ErrorKind::config,
          "run too short for the schedule: " + std::to_string(total_steps) +
              " steps; grow the data or epochs");

  std::vector<long long> val_steps = validation_schedule(steps_per_epoch, config.epochs);
  std::set<long long> val_marks(val_steps.begin(), val_steps.end());

  Optimizer opt_backbone(config.optimizer, model.backbone_parameters(), config.weight_decay);
  Optimizer opt_head(config.optimizer, model.head_parameters(), config.weight_decay);
  std::vector<Parameter*> all_params = model.parameters();

  Rng dropout_rng(derive_seed(config.seed, kDropoutStream));

  std::vector<TrainLogEntry> log;
  double best_f1 = -1.0;
  long long best_step = -1;
  std::vector<Matrix> best_params;

  long long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(train_records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(derive_seed(config.seed, kShuffleStream, static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    for (std::size_t offset = 0; offset < order.size();
         offset += static_cast<std::size_t>(config.batch_size)) {
      std::size_t batch_end =
          std::min(order.size(), offset + static_cast<std::size_t>(config.batch_size));
      const double batch_len = static_cast<double>(batch_end - offset);
      ++step;

      double batch_loss = 0.0;
      for (std::size_t b = offset; b < batch_end; ++b) {
        std::size_t idx = order[b];
        double loss = model.train_forward(train_inputs[idx], *train_records[idx].label,
                                          Mode::train, &dropout_rng, /*accumulate_grads=*/true,
                                          /*grad_scale=*/1.0 / batch_len);
        batch_loss += loss;
      }
      batch_loss /= batch_len;
      if (!std::isfinite(batch_loss)) {
        std::ostringstream ids;
        for (std::size_t b = offset; b < batch_end; ++b) {
          if (b > offset) ids << ", ";
          ids << train_records[order[b]].id;
        }
        fail(ErrorKind::numeric, "non-finite loss at step " + std::to_string(step) +
                                     " (batch: " + ids.str() + ")");
      }

      if (config.grad_clip > 0.0) {
        double norm = global_grad_norm(all_params);
        if (norm > config.grad_clip) scale_grads(all_params, config.grad_clip / norm);
      }
      double lr_b = lr_at_step(step, total_steps, config.backbone_max_lr, config.warmup_fraction);
      double lr_h = lr_at_step(step, total_steps, config.head_max_lr, config.warmup_fraction);
      opt_backbone.step(lr_b);
      opt_head.step(lr_h);
      zero_grads(all_params);

      TrainLogEntry entry{step, lr_b, lr_h, batch_loss, std::nullopt};
      if (val_marks.count(step) > 0) {
        double f1 = validation_macro_f1_pn(model, val_records, val_inputs, jobs);
        entry.val_macro_f1_pn = f1;
        if (f1 > best_f1) {
          best_f1 = f1;
          best_step = step;
          best_params = model.snapshot_parameters();
        }
      }
      if (log_stream) {
        *log_stream << "step=" << entry.step << " lr_backbone=" << entry.lr_backbone
                    << " lr_head=" << entry.lr_head << " loss=" << entry.loss;
        if (entry.val_macro_f1_pn) {
          *log_stream << " val_macro_f1_pn=" << *entry.val_macro_f1_pn;
        }
        *log_stream << '\n';
      }
      log.push_back(std::move(entry));
    }
  }

  model.restore_parameters(best_params);
  return TrainResult{Checkpoint{std::move(model), best_step, best_f1}, std::move(log),
                     total_steps, std::move(val_steps)};
}

LogitSet mc_dropout_predict(const Checkpoint& checkpoint, const TokenizedInput& input, int T,
                            Rng& rng) {
  require(T >= 1, ErrorKind::contract, "mc_dropout_predict: T must be >= 1");
  const SentimentModel& model = checkpoint.model;
  Logits sum = Logits::Zero();
  for (int t = 0; t < T; ++t) {
    LogitSet sample;
    if (model.config().head_variant == HeadVariant::pooled_sentiment) {
      sample = pooled_sentiment_forward(model.encoder(), model.head(), input, Mode::train, &rng);
    } else {
      sample = hamam_forward(model.encoder(), model.head(), input, Mode::train, &rng,
                             model.config().entity_masking);
    }
    sum += sample.values;
  }
  return {sum / static_cast<double>(T), Provenance::final_average};
}

double train_mlm(ToyEncoder& encoder, const Vocabulary& vocab,
                 const std::vector<std::string>& sentences, const MlmConfig& config) {
  require(config.epochs >= 1 && config.batch_size >= 1, ErrorKind::config,
          "mlm config: epochs and batch_size must be positive");
  require(config.mask_prob > 0.0 && config.mask_prob <= 1.0, ErrorKind::config,
          "mlm config: mask_prob must lie in (0, 1]");
  require(!sentences.empty(), ErrorKind::validation, "mlm training needs sentences");

  std::vector<std::vector<int>> corpus;
  corpus.reserve(sentences.size());
  for (const std::string& sentence : sentences) {
    std::vector<int> ids;
    for (const SurfaceToken& tok : lex(sentence)) ids.push_back(vocab.id(tok.text));
    if (!ids.empty()) corpus.push_back(std::move(ids));
  }
  require(!corpus.empty(), ErrorKind::validation, "mlm corpus is empty after tokenization");

  std::vector<Parameter*> params = encoder.parameters();
  Optimizer opt(OptimizerKind::adamw, params, /*weight_decay=*/0.0);
  Rng rng(derive_seed(config.seed, 0x313A));

  double last_epoch_loss = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    double epoch_loss = 0.0;
    long long scored = 0;
    for (std::size_t offset = 0; offset < order.size();
         offset += static_cast<std::size_t>(config.batch_size)) {
      std::size_t batch_end =
          std::min(order.size(), offset + static_cast<std::size_t>(config.batch_size));
      const double batch_len = static_cast<double>(batch_end - offset);

      for (std::size_t b = offset; b < batch_end; ++b) {
        const std::vector<int>& ids = corpus[order[b]];
        std::vector<std::size_t> masked_pos;
        for (std::size_t i = 0; i < ids.size(); ++i) {
          if (rng.uniform() < config.mask_prob) masked_pos.push_back(i);
        }
        if (masked_pos.empty()) masked_pos.push_back(rng.uniform_int(ids.size()));

        std::vector<int> masked_ids = ids;
        for (std::size_t pos : masked_pos) masked_ids[pos] = Vocabulary::kMask;

        ToyEncoder::Trace trace;
        HiddenStates hidden =
            encoder.forward(masked_ids, encoder.default_mask(masked_ids), &trace);
        Matrix logits = encoder.mlm_logits(hidden);

        Matrix d_logits = Matrix::Zero(logits.rows(), logits.cols());
        double loss = 0.0;
        const double scale = 1.0 / (static_cast<double>(masked_pos.size()) * batch_len);
        for (std::size_t pos : masked_pos) {
          const auto row = static_cast<Eigen::Index>(pos);
          Vector row_logits = logits.row(row).transpose();
          double lse = log_sum_exp(row_logits);
          loss += lse - row_logits(ids[pos]);
          Vector grad = softmax_vec(row_logits);
          grad(ids[pos]) -= 1.0;
          d_logits.row(row) = grad.transpose() * scale;
        }
        loss /= static_cast<double>(masked_pos.size());
        epoch_loss += loss;
        ++scored;

        Matrix d_hidden = encoder.mlm_logits_backward(d_logits, hidden);
        encoder.backward(trace, d_hidden);
      }
      require(std::isfinite(epoch_loss), ErrorKind::numeric, "non-finite mlm loss");
      opt.step(config.lr);
      zero_grads(params);
    }
    last_epoch_loss = epoch_loss / static_cast<double>(scored);
  }
  return last_epoch_loss;
}

}  // namespace nesa
