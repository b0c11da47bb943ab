#pragma once

#include "nesa/model.hpp"

#include <cstdint>
#include <filesystem>

namespace nesa {

// Self-describing binary container: config echo, vocabulary plus its hash,
// selection metadata, and named parameter arrays. Reloading reproduces
// eval-mode logits bitwise; the vocabulary hash is verified on load.
struct Checkpoint {
  SentimentModel model;
  long long step = 0;
  double val_macro_f1_pn = 0.0;

  const TrainConfig& config() const { return model.config(); }
};

void save_checkpoint(const std::filesystem::path& path, SentimentModel& model, long long step,
                     double val_macro_f1_pn);

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace nesa
