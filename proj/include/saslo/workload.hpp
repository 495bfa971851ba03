#pragma once

// Synthetic contexts and bandit training triplets.

#include <cstdint>
#include <vector>

#include "saslo/bandit.hpp"
#include "saslo/scene.hpp"

namespace saslo {

struct WorkloadConfig {
  SceneKind scene = SceneKind::kMixed;
  SceneConfig scene_config{};
  int grid_size = kDefaultGridSize;
  int n_stimuli = kDefaultStimuli;
  int samples_per_scene = 50;  // fresh objects and arm per sample, scene reused
};

// Luminance grid of a freshly synthesized clip plus uniformly placed objects.
ContextGrid synth_context(const WorkloadConfig& cfg, Rng& rng);

// Random feasible arms on synthetic contexts, rewarded by the layout reward
// under `reward_cfg`.
std::vector<TrainingSample> synthetic_training_set(int n, const WorkloadConfig& cfg, const RewardCurves& curves,
                                                   const RewardConfig& reward_cfg, std::uint64_t seed);

// Recomputes every reward under a different reward configuration.
std::vector<TrainingSample> relabel(std::vector<TrainingSample> data, const RewardCurves& curves,
                                    const RewardConfig& reward_cfg);

}  // namespace saslo
