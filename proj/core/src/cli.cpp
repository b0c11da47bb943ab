#include "nesa/cli.hpp"

#include "nesa/checkpoint.hpp"
#include "nesa/decision.hpp"
#include "nesa/errors.hpp"
#include "nesa/evaluation.hpp"
#include "nesa/folds.hpp"
#include "nesa/io.hpp"
#include "nesa/manifest.hpp"
#include "nesa/trainer.hpp"
#include "nesa/zeroshot.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace nesa::cli {

namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

bool text_has_key(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos || line[begin] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string k = line.substr(begin, eq - begin);
    while (!k.empty() && (k.back() == ' ' || k.back() == '\t')) k.pop_back();
    if (k == key) return true;
  }
  return false;
}

std::string manifest_path_for(const fs::path& out_path) {
  return out_path.string() + ".manifest.json";
}

// Shared joining for evaluate/report: returns aligned records, labels and
// probabilities ordered by the gold file.
struct AlignedPredictions {
  std::vector<Record> records;
  std::vector<SentimentLabel> golds;
  std::vector<SentimentLabel> preds;
  std::vector<Eigen::Vector3d> probs;
};

AlignedPredictions align_predictions(const fs::path& predictions_path, const fs::path& gold_path) {
  struct Parsed {
    SentimentLabel label;
    Eigen::Vector3d probs;
  };
  std::map<std::string, Parsed> by_id;
  std::size_t line_number = 0;
  for (const std::string& line : read_lines(predictions_path)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      Parsed p;
      p.label = label_from_string(j.at("label").get<std::string>());
      const auto& probs = j.at("probs");
      require(probs.is_array() && probs.size() == kNumClasses, ErrorKind::parse,
              "probs must have 3 entries");
      for (int c = 0; c < kNumClasses; ++c) p.probs(c) = probs[static_cast<std::size_t>(c)];
      std::string id = j.at("id").get<std::string>();
      require(by_id.emplace(id, p).second, ErrorKind::validation,
              "duplicate prediction for id '" + id + "'");
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::parse, "predictions line " + std::to_string(line_number) + ": " + e.what());
    }
  }

  std::vector<Record> gold_records = read_records(gold_path);
  AlignedPredictions out;
  std::vector<std::string> missing;
  std::set<std::string> gold_ids;
  for (const Record& rec : gold_records) {
    require(rec.label.has_value(), ErrorKind::validation,
            "gold record '" + rec.id + "' is unlabeled");
    gold_ids.insert(rec.id);
    auto it = by_id.find(rec.id);
    if (it == by_id.end()) {
      missing.push_back(rec.id);
      continue;
    }
    out.records.push_back(rec);
    out.golds.push_back(*rec.label);
    out.preds.push_back(it->second.label);
    out.probs.push_back(it->second.probs);
  }
  for (const auto& [id, parsed] : by_id) {
    if (gold_ids.find(id) == gold_ids.end()) missing.push_back(id + " (prediction only)");
  }
  if (!missing.empty()) {
    std::string joined;
    std::size_t shown = std::min<std::size_t>(missing.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      if (i) joined += ", ";
      joined += missing[i];
    }
    if (missing.size() > shown) {
      joined += ", and " + std::to_string(missing.size() - shown) + " more";
    }
    fail(ErrorKind::alignment, "prediction/gold id mismatch: " + joined);
  }
  return out;
}

}  // namespace

TrainConfig resolve_config(const fs::path& config_path,
                           const std::map<std::string, std::string>& overrides,
                           std::optional<std::uint64_t> env_seed) {
  std::string file_text;
  if (!config_path.empty()) file_text = read_file(config_path);
  TrainConfig config = file_text.empty() ? TrainConfig{} : parse_train_config(file_text);

  bool seed_in_file = !file_text.empty() && text_has_key(file_text, "seed");
  std::map<std::string, std::string> effective = overrides;
  if (env_seed && effective.find("seed") == effective.end() && !seed_in_file) {
    effective["seed"] = std::to_string(*env_seed);
  }
  if (effective.empty()) {
    config.validate();
    return config;
  }

  // Rewrite the full serialized form with overrides substituted, then parse
  // again so validation and unknown-key rejection apply uniformly.
  std::istringstream in(serialize_train_config(config));
  std::ostringstream merged;
  std::set<std::string> used;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t eq = line.find('=');
    std::string key = line.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    auto it = effective.find(key);
    if (it != effective.end()) {
      merged << key << " = " << it->second << '\n';
      used.insert(key);
    } else {
      merged << line << '\n';
    }
  }
  for (const auto& [key, value] : effective) {
    require(used.count(key) > 0, ErrorKind::config, "unknown config key '" + key + "'");
  }
  return parse_train_config(merged.str());
}

void cmd_train(const TrainOptions& options) {
  Stopwatch watch;
  RunManifest manifest;
  manifest.command = "train";
  manifest.started_at = iso8601_utc_now();
  manifest.git_describe = git_describe_string();

  TrainConfig config = resolve_config(options.config_path, options.overrides, options.env_seed);
  std::string config_text = serialize_train_config(config);
  manifest.config_hash = to_hex(fnv1a64(config_text));
  manifest.seed = config.seed;
  manifest.input_hashes.emplace_back(options.data_path.string(),
                                     to_hex(hash_file(options.data_path)));

  std::vector<Record> records = read_records(options.data_path);
  Vocabulary vocab = Vocabulary::build(records);
  FoldAssignment folds = split_folds(records, config.fold_count, config.seed);

  fs::create_directories(options.out_dir);
  write_file_atomic(options.out_dir / "resolved_config.cfg", config_text);
  vocab.save(options.out_dir / "vocab.txt");
  write_file_atomic(options.out_dir / "fold_assignment.json", folds.to_json() + "\n");
  manifest.output_paths.push_back((options.out_dir / "resolved_config.cfg").string());
  manifest.output_paths.push_back((options.out_dir / "vocab.txt").string());
  manifest.output_paths.push_back((options.out_dir / "fold_assignment.json").string());

  for (int fold = 0; fold < config.fold_count; ++fold) {
    std::vector<Record> train_records;
    std::vector<Record> val_records;
    for (const Record& rec : records) {
      if (folds.assignment.at(rec.id) == fold) {
        val_records.push_back(rec);
      } else {
        train_records.push_back(rec);
      }
    }
    TrainConfig fold_config = config;
    fold_config.seed = derive_seed(config.seed, 0xF01D, static_cast<std::uint64_t>(fold));

    std::ostringstream log;
    TrainResult result = train_fold(fold_config, vocab, train_records, val_records, {}, &log,
                                    options.jobs);

    fs::path ckpt_path = options.out_dir / ("fold_" + std::to_string(fold) + ".ckpt");
    fs::path log_path = options.out_dir / ("fold_" + std::to_string(fold) + ".log");
    save_checkpoint(ckpt_path, result.checkpoint.model, result.checkpoint.step,
                    result.checkpoint.val_macro_f1_pn);
    write_file_atomic(log_path, log.str());
    manifest.output_paths.push_back(ckpt_path.string());
    manifest.output_paths.push_back(log_path.string());
    if (!options.quiet) {
      std::fprintf(stdout, "fold %d: best step %lld, val macro F1_pn %.2f\n", fold,
                   result.checkpoint.step, result.checkpoint.val_macro_f1_pn);
    }
  }

  manifest.wall_clock_seconds = watch.seconds();
  write_manifest(options.out_dir / "manifest.json", manifest);
}

void cmd_predict(const PredictOptions& options) {
  Stopwatch watch;
  require(!options.checkpoint_paths.empty(), ErrorKind::usage,
          "predict needs at least one checkpoint");

  RunManifest manifest;
  manifest.command = "predict";
  manifest.started_at = iso8601_utc_now();
  manifest.git_describe = git_describe_string();

  std::vector<Checkpoint> loaded;
  loaded.reserve(options.checkpoint_paths.size());
  std::ostringstream config_key;
  for (const fs::path& path : options.checkpoint_paths) {
    manifest.input_hashes.emplace_back(path.string(), to_hex(hash_file(path)));
    loaded.push_back(load_checkpoint(path));
    config_key << path.string() << ';';
  }
  if (options.neutral_threshold) config_key << "t=" << *options.neutral_threshold;
  manifest.config_hash = to_hex(fnv1a64(config_key.str()));
  manifest.seed = loaded.front().config().seed;
  manifest.input_hashes.emplace_back(options.data_path.string(),
                                     to_hex(hash_file(options.data_path)));

  std::vector<const Checkpoint*> checkpoints;
  for (const Checkpoint& c : loaded) checkpoints.push_back(&c);
  DecisionConfig decision{options.neutral_threshold};

  std::ostringstream out;
  for (const Record& rec : read_records(options.data_path)) {
    Prediction pred = predict(checkpoints, rec, decision);
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    j["label"] = to_string(pred.label);
    j["probs"] = {pred.probs(0), pred.probs(1), pred.probs(2)};
    if (options.include_model_logits) {
      nlohmann::json models = nlohmann::json::array();
      for (const Logits& l : pred.per_model) models.push_back({l(0), l(1), l(2)});
      j["per_model_logits"] = models;
    }
    out << j.dump() << '\n';
  }
  write_file_atomic(options.out_path, out.str());
  manifest.output_paths.push_back(options.out_path.string());
  manifest.wall_clock_seconds = watch.seconds();
  write_manifest(manifest_path_for(options.out_path), manifest);
}

void cmd_evaluate(const EvaluateOptions& options) {
  Stopwatch watch;
  RunManifest manifest;
  manifest.command = "evaluate";
  manifest.started_at = iso8601_utc_now();
  manifest.git_describe = git_describe_string();
  manifest.input_hashes.emplace_back(options.predictions_path.string(),
                                     to_hex(hash_file(options.predictions_path)));
  manifest.input_hashes.emplace_back(options.gold_path.string(),
                                     to_hex(hash_file(options.gold_path)));
  manifest.config_hash = to_hex(fnv1a64("evaluate"));

  AlignedPredictions aligned = align_predictions(options.predictions_path, options.gold_path);
  EvalMetrics metrics = evaluate(aligned.golds, aligned.preds);
  write_file_atomic(options.out_path, metrics_to_json(metrics) + "\n");
  manifest.output_paths.push_back(options.out_path.string());

  if (!options.report_path.empty()) {
    ErrorReport report =
        error_report(aligned.records, aligned.golds, aligned.preds, aligned.probs);
    write_file_atomic(options.report_path, report_to_text(report));
    manifest.output_paths.push_back(options.report_path.string());
  }
  manifest.wall_clock_seconds = watch.seconds();
  write_manifest(manifest_path_for(options.out_path), manifest);
}

void cmd_zeroshot(const ZeroshotOptions& options) {
  Stopwatch watch;
  const bool has_checkpoint = !options.checkpoint_path.empty();
  require(has_checkpoint != options.toy_seed.has_value(), ErrorKind::usage,
          "zeroshot needs exactly one of a checkpoint or a toy seed");
  require(options.fit_mlm_epochs == 0 || !has_checkpoint, ErrorKind::usage,
          "MLM fitting applies to the toy encoder only");

  RunManifest manifest;
  manifest.command = "zeroshot";
  manifest.started_at = iso8601_utc_now();
  manifest.git_describe = git_describe_string();
  manifest.input_hashes.emplace_back(options.data_path.string(),
                                     to_hex(hash_file(options.data_path)));
  manifest.input_hashes.emplace_back(options.lexicon_path.string(),
                                     to_hex(hash_file(options.lexicon_path)));

  std::vector<Record> records = read_records(options.data_path);
  PolarityLexicon lexicon = PolarityLexicon::load(options.lexicon_path);

  std::optional<Checkpoint> checkpoint;
  std::optional<Vocabulary> toy_vocab;
  std::unique_ptr<ToyEncoder> toy_encoder;
  const Backbone* backbone = nullptr;
  const Vocabulary* vocab = nullptr;

  if (has_checkpoint) {
    manifest.input_hashes.emplace_back(options.checkpoint_path.string(),
                                       to_hex(hash_file(options.checkpoint_path)));
    checkpoint = load_checkpoint(options.checkpoint_path);
    backbone = &checkpoint->model.encoder();
    vocab = &checkpoint->model.vocab();
    manifest.seed = checkpoint->config().seed;
    manifest.config_hash = to_hex(fnv1a64("zeroshot;" + options.checkpoint_path.string()));
  } else {
    manifest.seed = *options.toy_seed;
    manifest.config_hash =
        to_hex(fnv1a64("zeroshot;toy_seed=" + std::to_string(*options.toy_seed) +
                       ";fit_mlm=" + std::to_string(options.fit_mlm_epochs)));
    toy_vocab = Vocabulary::build(records);
    Rng init_rng(derive_seed(*options.toy_seed, 0x1A17));
    toy_encoder = std::make_unique<ToyEncoder>(EncoderConfig{}, toy_vocab->size(), init_rng);
    if (options.fit_mlm_epochs > 0) {
      std::vector<std::string> sentences;
      sentences.reserve(records.size());
      for (const Record& rec : records) sentences.push_back(rec.sentence);
      MlmConfig mlm;
      mlm.epochs = options.fit_mlm_epochs;
      mlm.seed = *options.toy_seed;
      train_mlm(*toy_encoder, *toy_vocab, sentences, mlm);
    }
    backbone = toy_encoder.get();
    vocab = &*toy_vocab;
  }

  std::ostringstream out;
  for (const Record& rec : records) {
    ZeroShotScore score = zero_shot_score(*backbone, *vocab, rec, lexicon);
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    j["label"] = to_string(score.label);
    j["p_good"] = score.p_good;
    j["p_bad"] = score.p_bad;
    j["margin"] = score.margin;
    j["margin_renormalized"] = score.margin_renormalized;
    out << j.dump() << '\n';
  }
  write_file_atomic(options.out_path, out.str());
  manifest.output_paths.push_back(options.out_path.string());
  manifest.wall_clock_seconds = watch.seconds();
  write_manifest(manifest_path_for(options.out_path), manifest);
}

void cmd_report(const ReportOptions& options) {
  Stopwatch watch;
  RunManifest manifest;
  manifest.command = "report";
  manifest.started_at = iso8601_utc_now();
  manifest.git_describe = git_describe_string();
  manifest.input_hashes.emplace_back(options.predictions_path.string(),
                                     to_hex(hash_file(options.predictions_path)));
  manifest.input_hashes.emplace_back(options.gold_path.string(),
                                     to_hex(hash_file(options.gold_path)));
  manifest.config_hash = to_hex(fnv1a64("report"));

  AlignedPredictions aligned = align_predictions(options.predictions_path, options.gold_path);
  ErrorReport report = error_report(aligned.records, aligned.golds, aligned.preds, aligned.probs);
  write_file_atomic(options.out_path, report_to_text(report));
  manifest.output_paths.push_back(options.out_path.string());
  if (!options.json_path.empty()) {
    write_file_atomic(options.json_path, report_to_json(report) + "\n");
    manifest.output_paths.push_back(options.json_path.string());
  }
  manifest.wall_clock_seconds = watch.seconds();
  write_manifest(manifest_path_for(options.out_path), manifest);
}

}  // namespace nesa::cli
