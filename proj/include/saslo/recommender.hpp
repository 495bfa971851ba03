#pragma once

// Diverse candidate sampling (farthest-first over a random feasible pool),
// bandit scoring, threshold-gated batch retry, and the two baselines.

#include <cstdint>
#include <string>
#include <vector>

#include "saslo/bandit.hpp"
#include "saslo/layout.hpp"

namespace saslo {

enum class Selection {
  kPredicted,  // argmax of x.theta (default)
  kUcb,        // argmax of x.theta + lambda ||x||_{A^-1}
};

struct SamplerConfig {
  int batch_size = 2000;
  double threshold = 0.8;
  int max_batches = 3;
  std::uint64_t seed = 0;
  // Random feasible layouts drawn per candidate before farthest-first
  // thinning.
  int pool_factor = 2;
  Selection selection = Selection::kPredicted;
  bool parallel = true;

  void validate() const;
};

// batch_size layouts, each stimulus within d_max of its object and no two
// stimuli on one cell. Farthest-first over a pool of pool_factor * batch_size
// random layouts, using the summed per-stimulus cell distance as the metric.
std::vector<Layout> sample_candidates(const ContextGrid& context, const RewardConfig& reward_cfg,
                                      const SamplerConfig& cfg, Rng& rng);

// Uniformly random batch of the same size, for diversity comparisons.
std::vector<Layout> sample_uniform(const ContextGrid& context, const RewardConfig& reward_cfg,
                                   int count, Rng& rng);

// Mean over candidates of the distance to their nearest other candidate.
double mean_min_pairwise_distance(const std::vector<Layout>& batch);

struct Recommendation {
  Layout layout;
  double predicted_reward = 0.0;
  double score = 0.0;  // the selection score (equal to predicted_reward for kPredicted)
  bool below_threshold = false;
  int batches_used = 0;
};

Recommendation recommend(const BanditState& state, const ContextGrid& context,
                         const RewardCurves& curves, const RewardConfig& reward_cfg,
                         const SamplerConfig& cfg);

// Same pipeline with the ISD component removed from features and reward. The
// state must have been trained the same way.
Recommendation loo_recommend(const BanditState& loo_state, const ContextGrid& context,
                             const RewardCurves& curves, const RewardConfig& reward_cfg,
                             const SamplerConfig& cfg);

// Stimuli overlaid on their objects.
Layout no_layout(const ContextGrid& context);

std::string recommendation_to_json(const Recommendation& rec);
Recommendation recommendation_from_json(const std::string& text);

}  // namespace saslo
