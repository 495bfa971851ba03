#pragma once

// Phenomenological SSVEP trial generator: fundamental + first harmonic at the
// stimulus frequency, a lateralized low-gamma component encoding rotation
// direction, and 1/f background noise. Response amplitude scales with a
// quality factor derived from the luminance / ISD reward curves.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "saslo/eeg.hpp"
#include "saslo/reward.hpp"
#include "saslo/rng.hpp"

namespace saslo {

enum class Rotation { kLeft, kRight };

inline constexpr std::array<double, kClasses> kStimulusFrequencies = {7.0, 7.5, 8.0, 8.5, 9.0, 9.5};

struct StimulusSpec {
  double frequency = 7.0;
  Rotation rotation = Rotation::kLeft;
};

// Class k flickers at 7 + 0.5 k Hz; whole-Hz stimuli rotate left.
StimulusSpec stimulus_for_class(int k);
int class_for_frequency(double f_hz);

struct TrialCondition {
  double luminance = 0.1;     // normalized background luminance behind the stimulus
  double isd_degrees = 45.0;  // distance to the nearest other stimulus
};

// Accuracy expected under a condition: the luminance accuracy curve (measured
// at the widest spacing) scaled by the relative ISD accuracy.
double expected_accuracy(const TrialCondition& cond, const RewardCurves& curves);

// Maps expected accuracy onto [0, 1]: 0 at chance, 1 at the best anchor.
double trial_quality(const TrialCondition& cond, const RewardCurves& curves);

struct SynthConfig {
  int channels = kChannels;
  double sample_rate = kSampleRate;
  double noise_rms = 1.0;          // independent 1/f noise per channel
  double common_noise_rms = 0.6;   // 1/f noise shared by all channels
  double ssvep_amplitude = 0.55;   // fundamental amplitude on Oz at quality 1
  double harmonic_ratio = 0.6;     // first harmonic relative to the fundamental
  double gamma_amplitude = 0.5;    // low-gamma RMS on the driven hemisphere at full drive
  // Response drive = quality_gain * quality^quality_exponent. The defaults
  // make a decoder trained at full drive land near the measured accuracy
  // curve when evaluated on 3 s windows.
  double quality_gain = 0.69;
  double quality_exponent = 0.77;

  // Full-amplitude responses, above the best calibrated operating point.
  static SynthConfig high_snr() {
    SynthConfig c;
    c.quality_gain = 1.0;
    return c;
  }
  double drive(double quality) const;
};

// Channel whose low-gamma power rises for left (resp. right) rotation.
int left_gamma_channel();   // PO5
int right_gamma_channel();  // PO6

EegEpoch synth_trial(const StimulusSpec& spec, double quality, double duration_s,
                     const SynthConfig& cfg, Rng& rng);
EegEpoch synth_trial(int label, double quality, double duration_s, const SynthConfig& cfg, Rng& rng);

// per_class trials of every class at one quality level, in class-interleaved
// order. Trial i uses its own derived RNG stream.
std::vector<EegEpoch> synth_dataset(int per_class, double quality, double duration_s,
                                    const SynthConfig& cfg, std::uint64_t seed);

}  // namespace saslo
