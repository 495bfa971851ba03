#pragma once

// Human-derived layout rewards: interpolated luminance / inter-stimulus
// distance curves, the stimulus-object distance constraint, and the
// minimum-aware aggregate over all stimuli of a layout.

#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace saslo {

inline constexpr double kDefaultAlpha = 0.25;
inline const double kDefaultDMax = 3.0 * std::sqrt(2.0);  // grid units
inline constexpr int kDefaultStimuli = 6;
inline constexpr double kDefaultDegreesPerCell = 4.0;

struct Anchor {
  double factor = 0.0;
  double accuracy = 0.0;
};

// Piecewise-linear interpolant through min-max normalized accuracies, clamped
// to the terminal values outside the anchor range.
class RewardCurve {
 public:
  RewardCurve() = default;
  explicit RewardCurve(std::vector<Anchor> anchors);

  // Normalized reward in [0, 1].
  double operator()(double x) const { return interpolate(normalized_, x); }
  // Interpolated raw accuracy (un-normalized).
  double accuracy(double x) const { return interpolate(accuracy_, x); }

  const std::vector<Anchor>& anchors() const { return anchors_; }
  const std::vector<double>& normalized_values() const { return normalized_; }
  bool empty() const { return anchors_.empty(); }

 private:
  double interpolate(const std::vector<double>& ys, double x) const;

  std::vector<Anchor> anchors_;
  std::vector<double> accuracy_;
  std::vector<double> normalized_;
};

RewardCurve curve_from_anchors(std::vector<Anchor> points);
double eval_curve(const RewardCurve& curve, double x);

// Anchor CSV: header "factor,accuracy"; lines starting with '#' are comments.
std::vector<Anchor> read_anchor_csv(const std::filesystem::path& path);
std::vector<Anchor> parse_anchor_csv(const std::string& text);
std::string anchors_to_csv(std::span<const Anchor> anchors);

// Nine normalized-luminance levels 0.1..0.9. The end accuracies are measured
// values; the interior ones are approximate and meant to be replaced.
std::vector<Anchor> default_luminance_anchors();
// Nine inter-stimulus distances 5..45 degrees; same caveat as above.
std::vector<Anchor> default_isd_anchors();

struct RewardCurves {
  RewardCurve luminance;  // factor: normalized luminance
  RewardCurve isd;        // factor: visual-angle degrees

  static RewardCurves defaults();
};

struct RewardConfig {
  double alpha = kDefaultAlpha;
  double d_max = kDefaultDMax;
  int n_stimuli = kDefaultStimuli;
  double degrees_per_cell = kDefaultDegreesPerCell;
  // Luminance-only optimization drops the ISD component from both the features
  // and the reward; the aggregate is then normalized over two components.
  bool include_isd = true;

  void validate() const;
  int components() const { return include_isd ? 3 : 2; }
};

RewardConfig read_reward_config(const std::filesystem::path& path);
RewardConfig reward_config_from_json(const std::string& text);
std::string reward_config_to_json(const RewardConfig& cfg);

struct StimulusAssessment {
  double luminance = 0.0;                  // normalized, [0, 1]
  double nearest_neighbor_distance = 0.0;  // visual-angle degrees
  double object_distance = 0.0;            // grid units
};

struct ComponentRewards {
  double luminance = 0.0;
  double isd = 0.0;
  double sod = 0.0;

  double sum() const { return luminance + isd + sod; }
};

double sod_reward(double d, double d_max);

ComponentRewards component_rewards(const StimulusAssessment& s, const RewardCurves& curves,
                                   const RewardConfig& cfg);

// alpha * mean(sum) / k + (1 - alpha) * min(sum) / k with k active components.
double aggregate_reward(std::span<const ComponentRewards> per_stimulus, double alpha,
                        int n_components = 3);

double layout_reward(std::span<const StimulusAssessment> assessments, const RewardCurves& curves,
                     const RewardConfig& cfg);

}  // namespace saslo
