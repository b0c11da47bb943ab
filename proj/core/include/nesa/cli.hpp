#pragma once

#include "nesa/train_config.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nesa::cli {

// Precedence for every key: flag override > config file > (seed only)
// NESA_SEED > built-in default.
TrainConfig resolve_config(const std::filesystem::path& config_path,
                           const std::map<std::string, std::string>& overrides,
                           std::optional<std::uint64_t> env_seed);

struct TrainOptions {
  std::filesystem::path config_path;  // empty = built-in defaults
  std::filesystem::path data_path;
  std::filesystem::path out_dir;
  std::map<std::string, std::string> overrides;
  std::optional<std::uint64_t> env_seed;
  int jobs = 1;
  bool quiet = false;
};

// Splits into folds, trains one model per fold (trained on the other folds,
// validated on its own), and writes fold checkpoints, logs, the fold
// assignment, the vocabulary, the resolved config, and a manifest.
void cmd_train(const TrainOptions& options);

struct PredictOptions {
  std::vector<std::filesystem::path> checkpoint_paths;
  std::filesystem::path data_path;
  std::filesystem::path out_path;
  std::optional<double> neutral_threshold;
  bool include_model_logits = true;
  int jobs = 1;
};

void cmd_predict(const PredictOptions& options);

struct EvaluateOptions {
  std::filesystem::path predictions_path;
  std::filesystem::path gold_path;
  std::filesystem::path out_path;
  std::filesystem::path report_path;  // optional error report, empty = skip
};

void cmd_evaluate(const EvaluateOptions& options);

struct ZeroshotOptions {
  std::filesystem::path data_path;
  std::filesystem::path lexicon_path;
  std::filesystem::path out_path;
  std::filesystem::path checkpoint_path;     // either a checkpoint ...
  std::optional<std::uint64_t> toy_seed;     // ... or a fresh toy encoder
  int fit_mlm_epochs = 0;                    // toy only: MLM-fit on the data first
};

void cmd_zeroshot(const ZeroshotOptions& options);

struct ReportOptions {
  std::filesystem::path predictions_path;
  std::filesystem::path gold_path;
  std::filesystem::path out_path;
  std::filesystem::path json_path;  // optional JSON variant
};

void cmd_report(const ReportOptions& options);

}  // namespace nesa::cli
