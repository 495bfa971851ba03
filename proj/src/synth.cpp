#include "saslo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "saslo/error.hpp"

namespace saslo {

StimulusSpec stimulus_for_class(int k) {
  require(k >= 0 && k < kClasses, "class index out of range");
  return {kStimulusFrequencies[k], k % 2 == 0 ? Rotation::kLeft : Rotation::kRight};
}

int class_for_frequency(double f_hz) {
  for (int k = 0; k < kClasses; ++k)
    if (std::abs(kStimulusFrequencies[k] - f_hz) < 1e-9) return k;
  fail("no stimulus flickers at " + std::to_string(f_hz) + " Hz");
}

double expected_accuracy(const TrialCondition& cond, const RewardCurves& curves) {
  const double ref_isd = curves.isd.anchors().back().factor;
  const double lum_acc = curves.luminance.accuracy(cond.luminance);
  const double isd_rel = curves.isd.accuracy(cond.isd_degrees) / curves.isd.accuracy(ref_isd);
  return std::clamp(lum_acc * isd_rel, 0.0, 1.0);
}

double trial_quality(const TrialCondition& cond, const RewardCurves& curves) {
  constexpr double chance = 1.0 / kClasses;
  double best = 0.0;
  for (const auto& a : curves.luminance.anchors()) best = std::max(best, a.accuracy);
  const double acc = expected_accuracy(cond, curves);
  return std::clamp((acc - chance) / (best - chance), 0.0, 1.0);
}

double SynthConfig::drive(double quality) const {
  return quality_gain * std::pow(std::clamp(quality, 0.0, 1.0), quality_exponent);
}

int left_gamma_channel() { return channel_index("PO5"); }
int right_gamma_channel() { return channel_index("PO6"); }

namespace {

enum class Side { kLeft, kRight, kMidline };

Side side_of(std::string_view name) {
  if (name == "POz" || name == "Oz") return Side::kMidline;
  const char last = name.back();
  return (last - '0') % 2 == 1 ? Side::kLeft : Side::kRight;
}

// Occipital dominance of the steady-state response.
double ssvep_gain(std::string_view name) {
  if (name == "Oz") return 1.0;
  if (name == "O1" || name == "O2") return 0.9;
  if (name == "POz") return 0.75;
  if (name == "PO1" || name == "PO2") return 0.7;
  if (name == "PO3" || name == "PO4") return 0.6;
  if (name == "PO5" || name == "PO6") return 0.5;
  return 0.45;  // PO7, PO8
}

// Paul Kellet's refined pink-noise filter, normalized to unit RMS.
std::vector<double> pink_noise(std::size_t n, Rng& rng) {
  std::normal_distribution<double> white(0.0, 1.0);
  double b[7] = {};
  std::vector<double> out(n);
  const std::size_t warmup = 1000;
  for (std::size_t i = 0; i < n + warmup; ++i) {
    const double w = white(rng);
    b[0] = 0.99886 * b[0] + w * 0.0555179;
    b[1] = 0.99332 * b[1] + w * 0.0750759;
    b[2] = 0.96900 * b[2] + w * 0.1538520;
    b[3] = 0.86650 * b[3] + w * 0.3104856;
    b[4] = 0.55000 * b[4] + w * 0.5329522;
    b[5] = -0.7616 * b[5] - w * 0.0168980;
    const double p = b[0] + b[1] + b[2] + b[3] + b[4] + b[5] + b[6] + w * 0.5362;
    b[6] = w * 0.115926;
    if (i >= warmup) out[i - warmup] = p;
  }
  double mean = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double& v : out) {
    v -= mean;
    ss += v * v;
  }
  const double rms = std::sqrt(ss / static_cast<double>(n));
  if (rms > 0.0)
    for (double& v : out) v /= rms;
  return out;
}

// Band-limited 35-45 Hz source: random-phase tones, unit RMS.
std::vector<double> gamma_source(std::size_t n, double fs, Rng& rng) {
  std::uniform_real_distribution<double> freq(35.5, 44.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  constexpr int kTones = 24;
  std::vector<double> out(n, 0.0);
  for (int k = 0; k < kTones; ++k) {
    const double f = freq(rng);
    const double ph = phase(rng);
    for (std::size_t i = 0; i < n; ++i) out[i] += std::sin(2.0 * std::numbers::pi * f * i / fs + ph);
  }
  const double scale = std::sqrt(2.0 / kTones);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace

EegEpoch synth_trial(const StimulusSpec& spec, double quality, double duration_s,
                     const SynthConfig& cfg, Rng& rng) {
  require(duration_s > 0.0, "trial duration must be positive");
  require(cfg.channels >= 1 && cfg.channels <= kChannels, "synthesizer supports 1..12 channels");
  const auto n = static_cast<std::size_t>(std::lround(duration_s * cfg.sample_rate));
  require(n > 0, "trial shorter than one sample");
  require(cfg.quality_gain >= 0.0 && cfg.quality_exponent > 0.0, "invalid quality mapping");
  const double drive = cfg.drive(quality);

  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double phi1 = phase(rng);
  const double phi2 = phase(rng);
  const auto gamma = gamma_source(n, cfg.sample_rate, rng);
  const auto common = pink_noise(n, rng);

  EegEpoch e(cfg.channels, static_cast<int>(n), cfg.sample_rate);
  e.label = -1;
  const double w = 2.0 * std::numbers::pi * spec.frequency / cfg.sample_rate;
  for (int c = 0; c < cfg.channels; ++c) {
    const auto name = kChannelNames[c];
    const double g = ssvep_gain(name);
    // Response latency grows away from Oz.
    const double lag = 0.8 * (1.0 - g);
    const double a1 = drive * cfg.ssvep_amplitude * g;
    const double a2 = a1 * cfg.harmonic_ratio;
    const Side side = side_of(name);
    const bool driven = (side == Side::kLeft && spec.rotation == Rotation::kLeft) ||
                        (side == Side::kRight && spec.rotation == Rotation::kRight);
    const double ag = drive * cfg.gamma_amplitude * (driven ? 1.0 : 0.3);
    const auto own = pink_noise(n, rng);
    auto row = e.row(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i);
      row[i] = a1 * std::sin(w * t + phi1 - lag) + a2 * std::sin(2.0 * w * t + phi2 - 2.0 * lag) +
               ag * gamma[i] + cfg.noise_rms * own[i] + cfg.common_noise_rms * common[i];
    }
  }
  return e;
}

EegEpoch synth_trial(int label, double quality, double duration_s, const SynthConfig& cfg, Rng& rng) {
  EegEpoch e = synth_trial(stimulus_for_class(label), quality, duration_s, cfg, rng);
  e.label = label;
  return e;
}

std::vector<EegEpoch> synth_dataset(int per_class, double quality, double duration_s,
                                    const SynthConfig& cfg, std::uint64_t seed) {
  require(per_class >= 1, "need at least one trial per class");
  std::vector<EegEpoch> out;
  out.reserve(static_cast<std::size_t>(per_class) * kClasses);
  for (int i = 0; i < per_class; ++i)
    for (int k = 0; k < kClasses; ++k) {
      Rng rng = make_rng(seed, "synth_dataset", static_cast<std::uint64_t>(i * kClasses + k));
      out.push_back(synth_trial(k, quality, duration_s, cfg, rng));
    }
  return out;
}

}  // namespace saslo
