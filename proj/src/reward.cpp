#include "saslo/reward.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "saslo/error.hpp"

namespace saslo {

RewardCurve::RewardCurve(std::vector<Anchor> anchors) : anchors_(std::move(anchors)) {
  require(anchors_.size() >= 2, "reward curve needs at least two anchors");
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    require(std::isfinite(anchors_[i].factor) && std::isfinite(anchors_[i].accuracy),
            "reward curve anchors must be finite");
    if (i > 0)
      require(anchors_[i].factor > anchors_[i - 1].factor,
              "reward curve anchors must be strictly increasing in factor value");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& a : anchors_) {
    lo = std::min(lo, a.accuracy);
    hi = std::max(hi, a.accuracy);
  }
  require(hi > lo, "reward curve anchors have no dynamic range (all accuracies equal)");
  for (const auto& a : anchors_) {
    accuracy_.push_back(a.accuracy);
    // Extremes map exactly onto 0 and 1.
    normalized_.push_back(a.accuracy == lo ? 0.0 : a.accuracy == hi ? 1.0 : (a.accuracy - lo) / (hi - lo));
  }
}

double RewardCurve::interpolate(const std::vector<double>& ys, double x) const {
  require(!anchors_.empty(), "reward curve is empty");
  if (std::isnan(x)) fail("reward curve queried with NaN");
  if (x <= anchors_.front().factor) return ys.front();
  if (x >= anchors_.back().factor) return ys.back();
  const auto it = std::upper_bound(anchors_.begin(), anchors_.end(), x,
                                   [](double v, const Anchor& a) { return v < a.factor; });
  const std::size_t hi = static_cast<std::size_t>(it - anchors_.begin());
  const std::size_t lo = hi - 1;
  const double x0 = anchors_[lo].factor;
  const double x1 = anchors_[hi].factor;
  if (x == x0) return ys[lo];
  const double t = (x - x0) / (x1 - x0);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

RewardCurve curve_from_anchors(std::vector<Anchor> points) { return RewardCurve(std::move(points)); }

double eval_curve(const RewardCurve& curve, double x) { return std::clamp(curve(x), 0.0, 1.0); }

std::vector<Anchor> parse_anchor_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<Anchor> out;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header) {
      std::string h;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) h.push_back(c);
      if (h != "factor,accuracy")
        fail(ErrorKind::kInput, "anchor CSV: expected header 'factor,accuracy', got '" + line + "'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      fail(ErrorKind::kInput, "anchor CSV line " + std::to_string(lineno) + ": missing comma");
    try {
      out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      fail(ErrorKind::kInput, "anchor CSV line " + std::to_string(lineno) + ": not a number");
    }
  }
  if (!header) fail(ErrorKind::kInput, "anchor CSV: missing header");
  return out;
}

std::vector<Anchor> read_anchor_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInput, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_anchor_csv(ss.str());
}

std::string anchors_to_csv(std::span<const Anchor> anchors) {
  std::ostringstream out;
  out << "factor,accuracy\n";
  for (const auto& a : anchors) out << a.factor << ',' << a.accuracy << '\n';
  return out.str();
}

std::vector<Anchor> default_luminance_anchors() {
  return {{0.1, 0.91}, {0.2, 0.89}, {0.3, 0.85}, {0.4, 0.78}, {0.5, 0.71},
          {0.6, 0.64}, {0.7, 0.57}, {0.8, 0.41}, {0.9, 0.25}};
}

std::vector<Anchor> default_isd_anchors() {
  return {{5, 0.46},  {10, 0.58}, {15, 0.69}, {20, 0.79}, {25, 0.88},
          {30, 0.89}, {35, 0.90}, {40, 0.92}, {45, 0.91}};
}

RewardCurves RewardCurves::defaults() {
  return {RewardCurve(default_luminance_anchors()), RewardCurve(default_isd_anchors())};
}

void RewardConfig::validate() const {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(d_max > 0.0 && std::isfinite(d_max), "d_max must be positive");
  require(n_stimuli >= 1, "n_stimuli must be at least 1");
  require(degrees_per_cell > 0.0 && std::isfinite(degrees_per_cell),
          "degrees_per_cell must be positive");
}

RewardConfig reward_config_from_json(const std::string& text) {
  RewardConfig cfg;
  try {
    const auto j = nlohmann::json::parse(text);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.d_max = j.value("d_max", cfg.d_max);
    cfg.n_stimuli = j.value("n_stimuli", cfg.n_stimuli);
    cfg.degrees_per_cell = j.value("degrees_per_cell", cfg.degrees_per_cell);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, std::string("reward config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RewardConfig read_reward_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInput, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return reward_config_from_json(ss.str());
}

std::string reward_config_to_json(const RewardConfig& cfg) {
  nlohmann::json j = {{"alpha", cfg.alpha},
                      {"d_max", cfg.d_max},
                      {"n_stimuli", cfg.n_stimuli},
                      {"degrees_per_cell", cfg.degrees_per_cell}};
  return j.dump(2) + "\n";
}

double sod_reward(double d, double d_max) {
  require(d_max > 0.0, "d_max must be positive");
  return std::max(0.0, 1.0 - d / d_max);
}

ComponentRewards component_rewards(const StimulusAssessment& s, const RewardCurves& curves,
                                   const RewardConfig& cfg) {
  ComponentRewards c;
  c.luminance = eval_curve(curves.luminance, s.luminance);
  c.isd = cfg.include_isd ? eval_curve(curves.isd, s.nearest_neighbor_distance) : 0.0;
  c.sod = sod_reward(s.object_distance, cfg.d_max);
  return c;
}

double aggregate_reward(std::span<const ComponentRewards> per_stimulus, double alpha,
                        int n_components) {
  require(!per_stimulus.empty(), "layout reward needs at least one stimulus");
  require(n_components >= 1, "at least one reward component is required");
  double total = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& c : per_stimulus) {
    const double s = c.sum();
    total += s;
    lowest = std::min(lowest, s);
  }
  const double k = n_components;
  const double n = static_cast<double>(per_stimulus.size());
  return alpha * total / (k * n) + (1.0 - alpha) / k * lowest;
}

double layout_reward(std::span<const StimulusAssessment> assessments, const RewardCurves& curves,
                     const RewardConfig& cfg) {
  require(!assessments.empty(), "layout reward needs at least one stimulus");
  require(static_cast<int>(assessments.size()) == cfg.n_stimuli,
          "layout reward: expected " + std::to_string(cfg.n_stimuli) + " stimuli, got " +
              std::to_string(assessments.size()));
  std::vector<ComponentRewards> parts;
  parts.reserve(assessments.size());
  for (const auto& s : assessments) parts.push_back(component_rewards(s, curves, cfg));
  return std::clamp(aggregate_reward(parts, cfg.alpha, cfg.components()), 0.0, 1.0);
}

}  // namespace saslo
