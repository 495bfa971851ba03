#include "saslo/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "saslo/error.hpp"
#include "saslo/kernels.hpp"

namespace saslo {

void SamplerConfig::validate() const {
  require(batch_size >= 1, "batch_size must be at least 1");
  require(threshold >= 0.0 && std::isfinite(threshold), "threshold must be finite and non-negative");
  require(max_batches >= 1, "max_batches must be at least 1");
  require(pool_factor >= 1, "pool_factor must be at least 1");
}

namespace {

std::vector<kernels::CellIndex> flatten(const std::vector<Layout>& layouts) {
  std::vector<kernels::CellIndex> flat;
  for (const auto& l : layouts)
    for (Cell c : l.positions) flat.push_back({c.col, c.row});
  return flat;
}

}  // namespace

std::vector<Layout> sample_candidates(const ContextGrid& context, const RewardConfig& reward_cfg,
                                      const SamplerConfig& cfg, Rng& rng) {
  context.validate();
  cfg.validate();
  const LayoutSampler sampler(context, reward_cfg.d_max);
  const std::size_t pool_size = static_cast<std::size_t>(cfg.batch_size) * cfg.pool_factor;
  std::vector<Layout> pool;
  pool.reserve(pool_size);
  for (std::size_t k = 0; k < pool_size; ++k) pool.push_back(sampler.draw(rng));
  if (cfg.batch_size == 1) return {pool.front()};

  const std::size_t n = context.objects.size();
  const auto flat = flatten(pool);
  std::vector<double> min_dist(pool_size, std::numeric_limits<double>::infinity());
  std::vector<Layout> batch;
  batch.reserve(cfg.batch_size);
  std::size_t next = 0;  // the first pool draw seeds the selection
  for (int b = 0; b < cfg.batch_size; ++b) {
    batch.push_back(pool[next]);
    min_dist[next] = -std::numeric_limits<double>::infinity();
    const std::span<const kernels::CellIndex> picked(flat.data() + next * n, n);
    next = cfg.parallel ? kernels::omp::farthest_first_update(flat, n, picked, min_dist)
                        : kernels::serial::farthest_first_update(flat, n, picked, min_dist);
  }
  return batch;
}

std::vector<Layout> sample_uniform(const ContextGrid& context, const RewardConfig& reward_cfg,
                                   int count, Rng& rng) {
  const LayoutSampler sampler(context, reward_cfg.d_max);
  std::vector<Layout> out;
  for (int k = 0; k < count; ++k) out.push_back(sampler.draw(rng));
  return out;
}

double mean_min_pairwise_distance(const std::vector<Layout>& batch) {
  if (batch.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < batch.size(); ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < batch.size(); ++b) {
      if (a == b) continue;
      double d = 0.0;
      for (std::size_t i = 0; i < batch[a].positions.size(); ++i)
        d += cell_distance(batch[a].positions[i], batch[b].positions[i]);
      best = std::min(best, d);
    }
    total += best;
  }
  return total / static_cast<double>(batch.size());
}

Recommendation recommend(const BanditState& state, const ContextGrid& context,
                         const RewardCurves& curves, const RewardConfig& reward_cfg,
                         const SamplerConfig& cfg) {
  cfg.validate();
  require(state.dim() == 3 * context.n_stimuli(),
          "bandit dimension " + std::to_string(state.dim()) + " does not fit " +
              std::to_string(context.n_stimuli()) + " stimuli");
  Rng rng = make_rng(cfg.seed, "recommend");
  const auto dim = static_cast<std::size_t>(state.dim());
  const double lambda = cfg.selection == Selection::kUcb ? state.lambda() : 0.0;
  const Eigen::MatrixXd a_inv = state.a_inverse();
  std::vector<double> a_inv_flat(dim * dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) a_inv_flat[r * dim + c] = a_inv(r, c);
  const std::span<const double> theta(state.theta().data(), dim);

  Recommendation best;
  best.score = -std::numeric_limits<double>::infinity();
  for (int batch_no = 1; batch_no <= cfg.max_batches; ++batch_no) {
    const auto batch = sample_candidates(context, reward_cfg, cfg, rng);
    std::vector<double> features(batch.size() * dim);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const auto x = build_features(context, batch[k], curves, reward_cfg);
      std::copy(x.data(), x.data() + dim, features.begin() + static_cast<std::ptrdiff_t>(k * dim));
    }
    std::vector<double> scores(batch.size());
    if (cfg.parallel)
      kernels::omp::ucb_scores(features, dim, theta, a_inv_flat, lambda, scores);
    else
      kernels::serial::ucb_scores(features, dim, theta, a_inv_flat, lambda, scores);
    const auto k = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    double predicted = 0.0;
    for (std::size_t i = 0; i < dim; ++i) predicted += features[k * dim + i] * theta[i];

    best.batches_used = batch_no;
    if (scores[k] > best.score) {
      best.layout = batch[k];
      best.score = scores[k];
      best.predicted_reward = predicted;
    }
    if (predicted >= cfg.threshold) {
      // Accept this batch's winner even if an earlier batch scored higher.
      best.layout = batch[k];
      best.score = scores[k];
      best.predicted_reward = predicted;
      best.below_threshold = false;
      return best;
    }
  }
  best.below_threshold = true;
  return best;
}

Recommendation loo_recommend(const BanditState& loo_state, const ContextGrid& context,
                             const RewardCurves& curves, const RewardConfig& reward_cfg,
                             const SamplerConfig& cfg) {
  RewardConfig loo = reward_cfg;
  loo.include_isd = false;
  return recommend(loo_state, context, curves, loo, cfg);
}

Layout no_layout(const ContextGrid& context) { return {context.objects}; }

std::string recommendation_to_json(const Recommendation& rec) {
  nlohmann::json pos = nlohmann::json::array();
  for (Cell c : rec.layout.positions) pos.push_back({c.col, c.row});
  nlohmann::json j = {{"positions", pos},
                      {"predicted_reward", rec.predicted_reward},
                      {"below_threshold", rec.below_threshold},
                      {"batches_used", rec.batches_used}};
  return j.dump() + "\n";
}

Recommendation recommendation_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Recommendation r;
    for (const auto& c : j.at("positions")) r.layout.positions.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
    r.predicted_reward = j.at("predicted_reward").get<double>();
    r.below_threshold = j.at("below_threshold").get<bool>();
    r.batches_used = j.at("batches_used").get<int>();
    r.score = r.predicted_reward;
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, std::string("recommendation JSON: ") + e.what());
  }
}

}  // namespace saslo
