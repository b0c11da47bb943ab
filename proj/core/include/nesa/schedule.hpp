#pragma once

namespace nesa {

// Linear warmup from 0 to max_lr over the first round(warmup_fraction *
// total_steps) steps, then linear decay back to 0 at total_steps.
// lr(0) == lr(total_steps) == 0.
double lr_at_step(long long step, long long total_steps, double max_lr, double warmup_fraction);

}  // namespace nesa
