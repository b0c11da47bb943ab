#include "nesa/cli.hpp"
#include "nesa/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("NESA_SEED");
  if (!raw || !*raw) return std::nullopt;
  try {
    return std::stoull(raw);
  } catch (const std::exception&) {
    throw nesa::Error(nesa::ErrorKind::config,
                      std::string("NESA_SEED is not an integer: '") + raw + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Named-entity sentiment pipeline: dual-pass masked classification, "
               "cross-validation training, logit ensembling, and zero-shot MLM scoring"};
  app.require_subcommand(1);

  // train
  nesa::cli::TrainOptions train;
  std::map<std::string, std::string> train_flags;
  auto* cmd_train = app.add_subcommand("train", "Cross-validation training over folds");
  cmd_train->add_option("--config", train.config_path, "TrainConfig key = value file");
  cmd_train->add_option("--data", train.data_path, "labeled JSONL records")->required();
  cmd_train->add_option("--out", train.out_dir, "output directory")->required();
  cmd_train->add_option("--set", train_flags,
                        "override a config key (repeatable), e.g. --set epochs 3");
  cmd_train->add_option("--jobs", train.jobs, "validation worker cap")->check(CLI::PositiveNumber);
  cmd_train->add_flag("--quiet", train.quiet, "suppress per-fold progress lines");

  // predict
  nesa::cli::PredictOptions predict;
  bool no_model_logits = false;
  auto* cmd_predict = app.add_subcommand("predict", "Ensemble prediction from checkpoints");
  cmd_predict->add_option("--checkpoint", predict.checkpoint_paths, "checkpoint file (repeatable)")
      ->required();
  cmd_predict->add_option("--data", predict.data_path, "JSONL records")->required();
  cmd_predict->add_option("--out", predict.out_path, "predictions JSONL")->required();
  cmd_predict->add_option("--neutral-threshold", predict.neutral_threshold,
                          "demote low-confidence neutral to the best of positive/negative");
  cmd_predict->add_flag("--no-model-logits", no_model_logits,
                        "suppress the per_model_logits field");
  cmd_predict->add_option("--jobs", predict.jobs, "worker cap")->check(CLI::PositiveNumber);

  // evaluate
  nesa::cli::EvaluateOptions evaluate;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  cmd_evaluate->add_option("--predictions", evaluate.predictions_path, "predictions JSONL")
      ->required();
  cmd_evaluate->add_option("--gold", evaluate.gold_path, "labeled JSONL records")->required();
  cmd_evaluate->add_option("--out", evaluate.out_path, "metrics JSON")->required();
  cmd_evaluate->add_option("--report", evaluate.report_path, "also write a text error report");

  // zeroshot
  nesa::cli::ZeroshotOptions zeroshot;
  auto* cmd_zeroshot = app.add_subcommand("zeroshot", "MLM-based zero-shot scoring");
  cmd_zeroshot->add_option("--data", zeroshot.data_path, "JSONL records")->required();
  cmd_zeroshot->add_option("--lexicon", zeroshot.lexicon_path, "[good]/[bad] token lists")
      ->required();
  cmd_zeroshot->add_option("--out", zeroshot.out_path, "scores JSONL")->required();
  cmd_zeroshot->add_option("--checkpoint", zeroshot.checkpoint_path,
                           "use a trained checkpoint's encoder");
  cmd_zeroshot->add_option("--toy-seed", zeroshot.toy_seed, "use a fresh toy encoder");
  cmd_zeroshot->add_option("--fit-mlm", zeroshot.fit_mlm_epochs,
                           "MLM-fit the toy encoder on the data for this many epochs");

  // report
  nesa::cli::ReportOptions report;
  auto* cmd_report = app.add_subcommand("report", "Error report grouped by confusion cell");
  cmd_report->add_option("--predictions", report.predictions_path, "predictions JSONL")
      ->required();
  cmd_report->add_option("--gold", report.gold_path, "labeled JSONL records")->required();
  cmd_report->add_option("--out", report.out_path, "text report path")->required();
  cmd_report->add_option("--json", report.json_path, "also write the JSON variant");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_train->parsed()) {
      train.overrides = train_flags;
      train.env_seed = env_seed();
      nesa::cli::cmd_train(train);
    } else if (cmd_predict->parsed()) {
      predict.include_model_logits = !no_model_logits;
      nesa::cli::cmd_predict(predict);
    } else if (cmd_evaluate->parsed()) {
      nesa::cli::cmd_evaluate(evaluate);
    } else if (cmd_zeroshot->parsed()) {
      nesa::cli::cmd_zeroshot(zeroshot);
    } else if (cmd_report->parsed()) {
      nesa::cli::cmd_report(report);
    }
  } catch (const nesa::Error& e) {
    std::cerr << "error[" << nesa::to_string(e.kind()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
