#include "nesa/checkpoint.hpp"
#include "nesa/io.hpp"
#include "nesa/nn.hpp"
#include "nesa/loss.hpp"
#include "nesa/schedule.hpp"
#include "nesa/trainer.hpp"

#include "support/oracles.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace nesa;

namespace {

// Small but trainable setup shared by the fold tests.
TrainConfig small_config(std::uint64_t seed) {
  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 8;
  config.hidden_size = 16;
  config.num_layers = 1;
  config.num_heads = 2;
  config.ff_size = 32;
  config.max_seq_len = 32;
  config.seed = seed;
  return config;
}

struct SmallData {
  std::vector<Record> train;
  std::vector<Record> val;
  Vocabulary vocab;

  explicit SmallData(std::uint64_t seed) {
    synthetic::CueCorpusOptions options;
    options.count = 90;
    options.seed = seed;
    std::vector<Record> records = synthetic::cue_corpus(options);
    for (std::size_t i = 0; i < records.size(); ++i) {
      (i % 3 == 0 ? val : train).push_back(records[i]);
    }
    vocab = Vocabulary::build(records);
  }
};

}  // namespace

TEST_CASE("weighted cross-entropy matches the stated anchors") {
  const Logits weights{1.0, 1.0, 0.1};
  // Uniform logits, neutral gold: 0.1 * ln 3.
  double loss = weighted_cross_entropy(Logits::Zero(), SentimentLabel::neutral, weights);
  CHECK(loss == doctest::Approx(0.1 * std::log(3.0)).epsilon(1e-9));

  // Unit weights reduce to the standard cross-entropy.
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    Logits logits{rng.normal(), rng.normal(), rng.normal()};
    SentimentLabel gold = label_from_index(static_cast<int>(rng.uniform_int(3)));
    double weighted = weighted_cross_entropy(logits, gold, Logits::Ones());
    double standard = -std::log(softmax_vec(logits)(label_index(gold)));
    CHECK(std::abs(weighted - standard) < 1e-9);
  }

  // Overflow safety at |logit| = 1000.
  double huge = weighted_cross_entropy(Logits{1000.0, 0.0, 0.0}, SentimentLabel::positive,
                                       weights);
  CHECK(std::isfinite(huge));
  CHECK(huge == doctest::Approx(0.0).epsilon(1e-12));
  double huge_neg = weighted_cross_entropy(Logits{1000.0, 0.0, 0.0}, SentimentLabel::negative,
                                           weights);
  CHECK(std::isfinite(huge_neg));
  CHECK(huge_neg == doctest::Approx(1000.0).epsilon(1e-9));
}

TEST_CASE("loss gradient matches finite differences on the logits") {
  const Logits weights{1.0, 1.0, 0.1};
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Logits logits{rng.normal(), rng.normal(), rng.normal()};
    SentimentLabel gold = label_from_index(static_cast<int>(rng.uniform_int(3)));
    Logits grad = weighted_cross_entropy_backward(logits, gold, weights);
    for (int c = 0; c < 3; ++c) {
      const double eps = 1e-6;
      Logits up = logits;
      up(c) += eps;
      Logits down = logits;
      down(c) -= eps;
      double numeric = (weighted_cross_entropy(up, gold, weights) -
                        weighted_cross_entropy(down, gold, weights)) /
                       (2.0 * eps);
      CHECK(oracles::rel_error(grad(c), numeric, 1e-6) < 1e-5);
    }
  }
}

TEST_CASE("lr schedule reproduces the anchor points and is piecewise linear") {
  CHECK(lr_at_step(50, 1000, 1e-5, 0.1) == doctest::Approx(5e-6).epsilon(1e-12));
  CHECK(lr_at_step(100, 1000, 1e-5, 0.1) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(lr_at_step(550, 1000, 1e-5, 0.1) == doctest::Approx(5e-6).epsilon(1e-12));
  CHECK(lr_at_step(0, 1000, 1e-5, 0.1) == 0.0);
  CHECK(lr_at_step(1000, 1000, 1e-5, 0.1) == 0.0);

  // Second differences vanish away from the single peak.
  const long long total = 200;
  const long long warmup = 20;
  int peaks = 0;
  for (long long s = 1; s + 1 <= total; ++s) {
    double prev = lr_at_step(s - 1, total, 1e-4, 0.1);
    double here = lr_at_step(s, total, 1e-4, 0.1);
    double next = lr_at_step(s + 1, total, 1e-4, 0.1);
    double second = (next - here) - (here - prev);
    if (s == warmup) {
      ++peaks;
      CHECK(here == doctest::Approx(1e-4));
    } else {
      CHECK(std::abs(second) < 1e-18);
    }
  }
  CHECK(peaks == 1);
}

TEST_CASE("degenerate schedules are rejected") {
  CHECK_THROWS_AS(lr_at_step(1, 5, 1e-4, 0.1), Error);       // too few steps
  CHECK_THROWS_AS(lr_at_step(1, 100, 1e-4, 0.001), Error);   // warmup rounds to 0
  CHECK_THROWS_AS(lr_at_step(1, 100, 1e-4, 0.999), Error);   // warmup swallows the run
}

TEST_CASE("validation schedule: 6 epochs of odd-length epochs gives 13 evals") {
  // E odd: twelve half-epoch marks plus a distinct final step.
  std::vector<long long> marks = validation_schedule(25, 6);
  CHECK(marks.size() == 13);
  CHECK(marks.back() == 150);
  CHECK(marks.front() == 12);
  // E even: the final step lands on the last mark and is deduplicated.
  marks = validation_schedule(24, 6);
  CHECK(marks.size() == 12);
  CHECK(marks.back() == 144);
}

TEST_CASE("train_fold is deterministic and selects the best checkpoint") {
  SmallData data(4);
  TrainConfig config = small_config(11);

  TrainResult a = train_fold(config, data.vocab, data.train, data.val);
  TrainResult b = train_fold(config, data.vocab, data.train, data.val);

  CHECK(a.checkpoint.step == b.checkpoint.step);
  CHECK(a.checkpoint.val_macro_f1_pn == b.checkpoint.val_macro_f1_pn);
  std::vector<Parameter*> pa = a.checkpoint.model.parameters();
  std::vector<Parameter*> pb = b.checkpoint.model.parameters();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(oracles::values_equal(pa[i]->value, pb[i]->value));
  }

  // The selected step carries the max validation score, earliest first.
  double best = -1.0;
  long long best_step = -1;
  for (const TrainLogEntry& entry : a.log) {
    if (entry.val_macro_f1_pn && *entry.val_macro_f1_pn > best) {
      best = *entry.val_macro_f1_pn;
      best_step = entry.step;
    }
  }
  CHECK(a.checkpoint.step == best_step);
  CHECK(a.checkpoint.val_macro_f1_pn == best);

  // Different seeds genuinely change the parameters.
  TrainConfig other = small_config(12);
  TrainResult c = train_fold(other, data.vocab, data.train, data.val);
  CHECK_FALSE(oracles::values_equal(c.checkpoint.model.parameters()[0]->value, pa[0]->value));
}

TEST_CASE("parallel validation equals single-threaded validation") {
  SmallData data(6);
  TrainConfig config = small_config(7);
  SentimentModel model = SentimentModel::create(config, data.vocab);
  std::vector<TokenizedInput> inputs;
  for (const Record& rec : data.val) inputs.push_back(model.prepare(rec));
  double f1_single = validation_macro_f1_pn(model, data.val, inputs, 1);
  double f1_parallel = validation_macro_f1_pn(model, data.val, inputs, 4);
  CHECK(f1_single == f1_parallel);
}

TEST_CASE("train/val overlap and unlabeled records are rejected") {
  SmallData data(8);
  TrainConfig config = small_config(1);
  std::vector<Record> overlapping = data.val;
  overlapping.push_back(data.train.front());
  CHECK_THROWS_AS(train_fold(config, data.vocab, data.train, overlapping), Error);
}

TEST_CASE("checkpoints round-trip bitwise") {
  SmallData data(14);
  TrainConfig config = small_config(21);
  TrainResult result = train_fold(config, data.vocab, data.train, data.val);

  auto dir = std::filesystem::temp_directory_path() / "nesa_test_ckpt";
  std::filesystem::create_directories(dir);
  auto path = dir / "roundtrip.ckpt";
  save_checkpoint(path, result.checkpoint.model, result.checkpoint.step,
                  result.checkpoint.val_macro_f1_pn);
  Checkpoint loaded = load_checkpoint(path);

  CHECK(loaded.step == result.checkpoint.step);
  CHECK(loaded.val_macro_f1_pn == result.checkpoint.val_macro_f1_pn);
  CHECK(loaded.model.vocab().hash() == data.vocab.hash());

  TokenizedInput input = loaded.model.prepare(data.val.front());
  LogitSet before = result.checkpoint.model.forward_eval(input);
  LogitSet after = loaded.model.forward_eval(input);
  CHECK(oracles::values_equal(before.values, after.values));  // bitwise

  // A corrupted vocabulary hash is rejected.
  std::string bytes = read_file(path);
  bytes[20] ^= 0x01;  // inside the config echo
  auto bad_path = dir / "corrupt.ckpt";
  write_file_atomic(bad_path, bytes);
  CHECK_THROWS_AS(load_checkpoint(bad_path), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("doubling class weights with sgd and halved lr leaves training unchanged") {
  SmallData data(16);
  TrainConfig base = small_config(31);
  base.optimizer = OptimizerKind::sgd;
  base.grad_clip = 0.0;  // clipping would break exact scale equivalence
  base.dropout_rate = 0.0;

  TrainConfig scaled = base;
  scaled.class_weights = base.class_weights * 2.0;
  scaled.backbone_max_lr = base.backbone_max_lr / 2.0;
  scaled.head_max_lr = base.head_max_lr / 2.0;

  TrainResult a = train_fold(base, data.vocab, data.train, data.val);
  TrainResult b = train_fold(scaled, data.vocab, data.train, data.val);

  // Powers of two scale losses exactly and keep updates bit-identical.
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].loss * 2.0 == b.log[i].loss);
    if (a.log[i].val_macro_f1_pn) {
      REQUIRE(b.log[i].val_macro_f1_pn.has_value());
      CHECK(*a.log[i].val_macro_f1_pn == *b.log[i].val_macro_f1_pn);
    }
  }
  std::vector<Parameter*> pa = a.checkpoint.model.parameters();
  std::vector<Parameter*> pb = b.checkpoint.model.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(oracles::values_equal(pa[i]->value, pb[i]->value));
  }
}

TEST_CASE("the pooled-sentiment variant trains and round-trips its config") {
  SmallData data(26);
  TrainConfig config = small_config(51);
  config.head_variant = HeadVariant::pooled_sentiment;
  TrainResult result = train_fold(config, data.vocab, data.train, data.val);
  CHECK(result.checkpoint.config().head_variant == HeadVariant::pooled_sentiment);
  CHECK(result.checkpoint.val_macro_f1_pn >= 0.0);

  auto dir = std::filesystem::temp_directory_path() / "nesa_test_pooled";
  std::filesystem::create_directories(dir);
  auto path = dir / "pooled.ckpt";
  save_checkpoint(path, result.checkpoint.model, result.checkpoint.step,
                  result.checkpoint.val_macro_f1_pn);
  Checkpoint loaded = load_checkpoint(path);
  CHECK(loaded.config().head_variant == HeadVariant::pooled_sentiment);
  TokenizedInput input = loaded.model.prepare(data.val.front());
  CHECK(oracles::values_equal(loaded.model.forward_eval(input).values,
                              result.checkpoint.model.forward_eval(input).values));
  std::filesystem::remove_all(dir);
}

TEST_CASE("mc dropout with rate 0 equals the eval prediction for any T") {
  SmallData data(18);
  TrainConfig config = small_config(41);
  config.dropout_rate = 0.0;
  TrainResult result = train_fold(config, data.vocab, data.train, data.val);

  TokenizedInput input = result.checkpoint.model.prepare(data.val.front());
  LogitSet eval_logits = result.checkpoint.model.forward_eval(input);
  Rng rng(5);
  LogitSet mc = mc_dropout_predict(result.checkpoint, input, 7, rng);
  CHECK((mc.values - eval_logits.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mc dropout T=1 reproduces a single stochastic pass") {
  SmallData data(20);
  TrainConfig config = small_config(43);
  TrainResult result = train_fold(config, data.vocab, data.train, data.val);

  TokenizedInput input = result.checkpoint.model.prepare(data.val.front());
  Rng rng_a(77);
  LogitSet mc = mc_dropout_predict(result.checkpoint, input, 1, rng_a);
  Rng rng_b(77);
  const SentimentModel& model = result.checkpoint.model;
  LogitSet direct = hamam_forward(model.encoder(), model.head(), input, Mode::train, &rng_b,
                                  model.config().entity_masking);
  CHECK(oracles::values_equal(mc.values, direct.values));
}

TEST_CASE("mc dropout mean converges to the per-pass empirical mean") {
  SmallData data(22);
  TrainConfig config = small_config(45);
  TrainResult result = train_fold(config, data.vocab, data.train, data.val);
  TokenizedInput input = result.checkpoint.model.prepare(data.val.front());

  const int T = 1000;
  Rng rng_a(91);
  LogitSet mc = mc_dropout_predict(result.checkpoint, input, T, rng_a);

  // Replay the same stream pass by pass.
  Rng rng_b(91);
  const SentimentModel& model = result.checkpoint.model;
  Matrix passes(T, kNumClasses);
  for (int t = 0; t < T; ++t) {
    passes.row(t) = hamam_forward(model.encoder(), model.head(), input, Mode::train, &rng_b,
                                  model.config().entity_masking)
                        .values.transpose();
  }
  for (int c = 0; c < kNumClasses; ++c) {
    double mean = passes.col(c).mean();
    double var = (passes.col(c).array() - mean).square().sum() / (T - 1);
    double se = std::sqrt(var / T);
    CHECK(std::abs(mc.values(c) - mean) <= 3.0 * se + 1e-9);
  }
}
