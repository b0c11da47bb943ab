#include "nesa/cli.hpp"
#include "nesa/checkpoint.hpp"
#include "nesa/decision.hpp"
#include "nesa/errors.hpp"
#include "nesa/io.hpp"

#include "support/oracles.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

using namespace nesa;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Tiny but schedule-viable training setup.
std::map<std::string, std::string> tiny_overrides() {
  return {
      {"hidden_size", "16"}, {"num_layers", "1"}, {"num_heads", "2"},  {"ff_size", "32"},
      {"max_seq_len", "32"}, {"epochs", "2"},     {"fold_count", "2"}, {"batch_size", "4"},
      {"seed", "5"},
  };
}

fs::path write_corpus(const fs::path& dir, std::size_t count, std::uint64_t seed) {
  synthetic::CueCorpusOptions options;
  options.count = count;
  options.seed = seed;
  fs::path path = dir / "data.jsonl";
  write_records(path, synthetic::cue_corpus(options));
  return path;
}

}  // namespace

TEST_CASE("resolve_config precedence: flag > file > env > default") {
  TempDir tmp("nesa_cli_cfg");
  fs::path cfg = tmp.path / "train.cfg";
  write_file_atomic(cfg, "epochs = 3\nseed = 100\n");

  TrainConfig from_file = cli::resolve_config(cfg, {}, std::nullopt);
  CHECK(from_file.epochs == 3);
  CHECK(from_file.seed == 100);
  CHECK(from_file.batch_size == 8);  // untouched default

  TrainConfig flags_win = cli::resolve_config(cfg, {{"epochs", "4"}}, 777);
  CHECK(flags_win.epochs == 4);
  CHECK(flags_win.seed == 100);  // file beats env

  fs::path cfg_no_seed = tmp.path / "no_seed.cfg";
  write_file_atomic(cfg_no_seed, "epochs = 3\n");
  TrainConfig env_seed = cli::resolve_config(cfg_no_seed, {}, 777);
  CHECK(env_seed.seed == 777);

  TrainConfig flag_seed = cli::resolve_config(cfg_no_seed, {{"seed", "9"}}, 777);
  CHECK(flag_seed.seed == 9);

  CHECK(oracles::throws_with(
      [&] { cli::resolve_config(cfg, {{"no_such_key", "1"}}, std::nullopt); },
      ErrorKind::config, "no_such_key"));

  fs::path bad = tmp.path / "bad.cfg";
  write_file_atomic(bad, "epochs = 3\nwhatever = 1\n");
  CHECK(oracles::throws_with([&] { cli::resolve_config(bad, {}, std::nullopt); },
                             ErrorKind::config, "whatever"));
}

TEST_CASE("config serialization round-trips through parse") {
  TrainConfig config;
  config.seed = 1234;
  config.neutral_threshold = 0.55;
  config.head_variant = HeadVariant::pooled_sentiment;
  config.entity_masking = false;
  TrainConfig back = parse_train_config(serialize_train_config(config));
  CHECK(back.seed == 1234);
  CHECK(*back.neutral_threshold == 0.55);
  CHECK(back.head_variant == HeadVariant::pooled_sentiment);
  CHECK_FALSE(back.entity_masking);
  CHECK(serialize_train_config(back) == serialize_train_config(config));
}

TEST_CASE("train -> predict -> evaluate -> report pipeline") {
  TempDir tmp("nesa_cli_pipeline");
  fs::path data = write_corpus(tmp.path, 90, 3);

  cli::TrainOptions train;
  train.data_path = data;
  train.out_dir = tmp.path / "run";
  train.overrides = tiny_overrides();
  train.quiet = true;
  cli::cmd_train(train);

  CHECK(fs::exists(train.out_dir / "fold_0.ckpt"));
  CHECK(fs::exists(train.out_dir / "fold_1.ckpt"));
  CHECK(fs::exists(train.out_dir / "fold_0.log"));
  CHECK(fs::exists(train.out_dir / "vocab.txt"));
  CHECK(fs::exists(train.out_dir / "fold_assignment.json"));
  CHECK(fs::exists(train.out_dir / "manifest.json"));

  // The manifest is a JSON object naming the command and the outputs.
  nlohmann::json manifest = nlohmann::json::parse(read_file(train.out_dir / "manifest.json"));
  CHECK(manifest.at("command") == "train");
  CHECK(manifest.at("outputs").size() >= 7);

  // Training logs are line-oriented step records.
  std::string log = read_file(train.out_dir / "fold_0.log");
  CHECK(log.find("step=1 ") != std::string::npos);
  CHECK(log.find("lr_backbone=") != std::string::npos);
  CHECK(log.find("val_macro_f1_pn=") != std::string::npos);

  cli::PredictOptions predict;
  predict.checkpoint_paths = {train.out_dir / "fold_0.ckpt", train.out_dir / "fold_1.ckpt"};
  predict.data_path = data;
  predict.out_path = tmp.path / "preds.jsonl";
  predict.neutral_threshold = 0.55;
  cli::cmd_predict(predict);
  CHECK(fs::exists(predict.out_path));

  // Module-level oracle: the file decision equals the in-process decision.
  Checkpoint c0 = load_checkpoint(predict.checkpoint_paths[0]);
  Checkpoint c1 = load_checkpoint(predict.checkpoint_paths[1]);
  std::vector<Record> records = read_records(data);
  std::vector<std::string> lines = read_lines(predict.out_path);
  REQUIRE(lines.size() == records.size());
  nlohmann::json first = nlohmann::json::parse(lines[0]);
  Prediction direct = nesa::predict({&c0, &c1}, records[0], DecisionConfig{0.55});
  CHECK(first.at("id") == records[0].id);
  CHECK(first.at("label") == to_string(direct.label));
  CHECK(first.at("per_model_logits").size() == 2);

  cli::EvaluateOptions evaluate;
  evaluate.predictions_path = predict.out_path;
  evaluate.gold_path = data;
  evaluate.out_path = tmp.path / "metrics.json";
  evaluate.report_path = tmp.path / "errors.txt";
  cli::cmd_evaluate(evaluate);
  nlohmann::json metrics = nlohmann::json::parse(read_file(evaluate.out_path));
  CHECK(metrics.contains("macro_f1_pn"));
  CHECK(metrics.contains("confusion_matrix"));
  CHECK(fs::exists(evaluate.report_path));

  cli::ReportOptions report;
  report.predictions_path = predict.out_path;
  report.gold_path = data;
  report.out_path = tmp.path / "report.txt";
  report.json_path = tmp.path / "report.json";
  cli::cmd_report(report);
  CHECK(fs::exists(report.out_path));
  CHECK(fs::exists(report.json_path));
  CHECK(fs::exists(tmp.path / "report.txt.manifest.json"));

  // zeroshot can reuse a trained checkpoint's encoder and vocabulary; the
  // cue words are in the training vocabulary, so they resolve.
  fs::path lexicon = tmp.path / "lexicon.txt";
  write_file_atomic(lexicon, "[good]\npraised\nacclaimed\n[bad]\ncondemned\ncollapsing\n");
  cli::ZeroshotOptions zeroshot;
  zeroshot.data_path = data;
  zeroshot.lexicon_path = lexicon;
  zeroshot.out_path = tmp.path / "zeroshot.jsonl";
  zeroshot.checkpoint_path = train.out_dir / "fold_0.ckpt";
  cli::cmd_zeroshot(zeroshot);
  CHECK(read_lines(zeroshot.out_path).size() == records.size());

  // exactly one of checkpoint / toy seed
  zeroshot.toy_seed = 3;
  CHECK(oracles::throws_with([&] { cli::cmd_zeroshot(zeroshot); }, ErrorKind::usage,
                             "exactly one"));
}

TEST_CASE("evaluate with perfect predictions scores 100") {
  TempDir tmp("nesa_cli_perfect");
  fs::path data = write_corpus(tmp.path, 30, 8);
  std::vector<Record> records = read_records(data);

  std::string preds;
  for (const Record& rec : records) {
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    j["label"] = to_string(*rec.label);
    int idx = label_index(*rec.label);
    Eigen::Vector3d p{0.05, 0.05, 0.05};
    p(idx) = 0.9;
    j["probs"] = {p(0), p(1), p(2)};
    preds += j.dump() + "\n";
  }
  fs::path preds_path = tmp.path / "perfect.jsonl";
  write_file_atomic(preds_path, preds);

  cli::EvaluateOptions evaluate;
  evaluate.predictions_path = preds_path;
  evaluate.gold_path = data;
  evaluate.out_path = tmp.path / "metrics.json";
  cli::cmd_evaluate(evaluate);
  nlohmann::json metrics = nlohmann::json::parse(read_file(evaluate.out_path));
  CHECK(metrics.at("macro_f1_pn").get<double>() == doctest::Approx(100.0));
}

TEST_CASE("evaluate reports missing ids as an alignment error") {
  TempDir tmp("nesa_cli_misalign");
  fs::path data = write_corpus(tmp.path, 30, 9);
  std::vector<Record> records = read_records(data);

  std::string preds;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {  // drop the last id
    nlohmann::ordered_json j;
    j["id"] = records[i].id;
    j["label"] = "neutral";
    j["probs"] = {0.1, 0.1, 0.8};
    preds += j.dump() + "\n";
  }
  fs::path preds_path = tmp.path / "short.jsonl";
  write_file_atomic(preds_path, preds);

  cli::EvaluateOptions evaluate;
  evaluate.predictions_path = preds_path;
  evaluate.gold_path = data;
  evaluate.out_path = tmp.path / "metrics.json";
  CHECK(oracles::throws_with([&] { cli::cmd_evaluate(evaluate); }, ErrorKind::alignment,
                             records.back().id));
}

TEST_CASE("predict without checkpoints is a usage error") {
  cli::PredictOptions predict;
  predict.data_path = "unused.jsonl";
  predict.out_path = "unused_out.jsonl";
  CHECK(oracles::throws_with([&] { cli::cmd_predict(predict); }, ErrorKind::usage,
                             "at least one checkpoint"));
}

TEST_CASE("fold_count 1 is rejected by config validation") {
  TempDir tmp("nesa_cli_fold1");
  fs::path data = write_corpus(tmp.path, 30, 10);
  cli::TrainOptions train;
  train.data_path = data;
  train.out_dir = tmp.path / "run";
  train.overrides = tiny_overrides();
  train.overrides["fold_count"] = "1";
  train.quiet = true;
  CHECK(oracles::throws_with([&] { cli::cmd_train(train); }, ErrorKind::config, "fold_count"));
}

TEST_CASE("zeroshot with a fresh toy encoder emits margins") {
  TempDir tmp("nesa_cli_zeroshot");
  auto corpus = synthetic::mlm_corpus(40, 12, 4);
  fs::path data = tmp.path / "eval.jsonl";
  write_records(data, corpus.eval);
  fs::path lexicon = tmp.path / "lexicon.txt";
  write_file_atomic(lexicon, corpus.lexicon_text);

  // The lexicon adjectives never occur in the eval sentences, so the toy
  // vocabulary cannot resolve them; extend it through the train split.
  std::vector<Record> all = corpus.eval;
  all.insert(all.end(), corpus.train.begin(), corpus.train.end());
  fs::path vocab_data = tmp.path / "all.jsonl";
  write_records(vocab_data, all);

  cli::ZeroshotOptions zeroshot;
  zeroshot.data_path = vocab_data;
  zeroshot.lexicon_path = lexicon;
  zeroshot.out_path = tmp.path / "scores.jsonl";
  zeroshot.toy_seed = 7;
  cli::cmd_zeroshot(zeroshot);

  std::vector<std::string> lines = read_lines(zeroshot.out_path);
  REQUIRE(lines.size() == all.size());
  nlohmann::json j = nlohmann::json::parse(lines[0]);
  CHECK(j.contains("margin"));
  CHECK(j.contains("margin_renormalized"));
  std::string label = j.at("label");
  CHECK((label == "positive" || label == "negative"));
  CHECK(fs::exists(tmp.path / "scores.jsonl.manifest.json"));
}
