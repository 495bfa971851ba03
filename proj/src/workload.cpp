#include "saslo/workload.hpp"

#include "saslo/error.hpp"

namespace saslo {

ContextGrid synth_context(const WorkloadConfig& cfg, Rng& rng) {
  const auto frames = synth_scene(cfg.scene, cfg.scene_config, rng);
  LuminanceConfig lc;
  lc.grid_size = cfg.grid_size;
  ContextGrid ctx{estimate_grid(frames, lc), {}};
  ctx.objects = random_objects(cfg.grid_size, cfg.n_stimuli, rng);
  return ctx;
}

std::vector<TrainingSample> synthetic_training_set(int n, const WorkloadConfig& cfg, const RewardCurves& curves,
                                                   const RewardConfig& reward_cfg, std::uint64_t seed) {
  require(n >= 1, "training set size must be positive");
  require(cfg.samples_per_scene >= 1, "samples per scene must be positive");
  reward_cfg.validate();
  require(reward_cfg.n_stimuli == cfg.n_stimuli, "reward config and workload disagree on stimulus count");
  Rng rng = make_rng(seed, "bandit_training");
  std::vector<TrainingSample> out;
  out.reserve(static_cast<std::size_t>(n));
  ContextGrid ctx;
  for (int i = 0; i < n; ++i) {
    if (i % cfg.samples_per_scene == 0)
      ctx = synth_context(cfg, rng);
    else
      ctx.objects = random_objects(cfg.grid_size, cfg.n_stimuli, rng);
    Layout arm = random_layout(ctx, reward_cfg, rng);
    const double r = true_reward(ctx, arm, curves, reward_cfg);
    out.push_back({ctx, std::move(arm), r});
  }
  return out;
}

std::vector<TrainingSample> relabel(std::vector<TrainingSample> data, const RewardCurves& curves,
                                    const RewardConfig& reward_cfg) {
  for (auto& s : data) s.reward = true_reward(s.context, s.arm, curves, reward_cfg);
  return data;
}

}  // namespace saslo
