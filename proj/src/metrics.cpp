#include "saslo/metrics.hpp"

#include <cmath>

#include "saslo/error.hpp"

namespace saslo {

namespace {
double xlog2x(double x) { return x <= 0.0 ? 0.0 : x * std::log2(x); }
}  // namespace

double bits_per_trial(double p, int n_targets) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "accuracy must lie in [0, 1]");
  require(n_targets >= 2, "ITR needs at least two targets");
  const double n = n_targets;
  if (p <= 1.0 / n) return 0.0;
  // (1-p) log2((1-p)/(n-1)) = xlog2x(1-p) - (1-p) log2(n-1)
  const double bits = std::log2(n) + xlog2x(p) + xlog2x(1.0 - p) - (1.0 - p) * std::log2(n - 1.0);
  return std::max(0.0, bits);
}

double itr(double p, int n_targets, double t_c_seconds) {
  require(std::isfinite(t_c_seconds) && t_c_seconds > 0.0, "time cost must be positive");
  return bits_per_trial(p, n_targets) * 60.0 / t_c_seconds;
}

}  // namespace saslo
