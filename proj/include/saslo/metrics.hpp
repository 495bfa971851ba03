#pragma once

namespace saslo {

inline constexpr double kAttentionShiftSeconds = 0.135;

// Bits per selection for accuracy p over n targets, clamped at 0 below chance.
double bits_per_trial(double p, int n_targets);

// Information transfer rate in bits/min for a per-selection time cost t_c.
double itr(double p, int n_targets, double t_c_seconds);

// Decode window plus the attention-shift interval.
inline double time_cost(double window_s) { return window_s + kAttentionShiftSeconds; }

}  // namespace saslo
