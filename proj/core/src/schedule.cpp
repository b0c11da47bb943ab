#include "nesa/schedule.hpp"

#include "nesa/errors.hpp"

#include <cmath>

namespace nesa {

double lr_at_step(long long step, long long total_steps, double max_lr, double warmup_fraction) {
  require(total_steps >= 10, ErrorKind::config, "schedule needs at least 10 total steps");
  require(step >= 0 && step <= total_steps, ErrorKind::contract,
          "step " + std::to_string(step) + " outside [0, " + std::to_string(total_steps) + "]");
  const long long warmup = std::llround(warmup_fraction * static_cast<double>(total_steps));
  require(warmup > 0 && warmup < total_steps, ErrorKind::config,
          "degenerate schedule: warmup of " + std::to_string(warmup) + " steps out of " +
              std::to_string(total_steps));
  if (step <= warmup) {
    return max_lr * static_cast<double>(step) / static_cast<double>(warmup);
  }
  return max_lr * static_cast<double>(total_steps - step) /
         static_cast<double>(total_steps - warmup);
}

}  // namespace nesa
