#include <doctest.h>

#include <cmath>

#include "saslo/error.hpp"
#include "saslo/fir.hpp"
#include "saslo/spectrum.hpp"
#include "saslo/synth.hpp"

using namespace saslo;

namespace {

double band_power(const EegEpoch& e, int channel, Band band) {
  const auto f = bandpass(e, band);
  double ss = 0;
  for (double v : f.row(channel)) ss += v * v;
  return ss / f.samples;
}

}  // namespace

TEST_CASE("stimulus table") {
  for (int k = 0; k < kClasses; ++k) {
    const auto s = stimulus_for_class(k);
    CHECK(s.frequency == 7.0 + 0.5 * k);
    const bool whole = std::fmod(s.frequency, 1.0) == 0.0;
    CHECK((s.rotation == Rotation::kLeft) == whole);
    CHECK(class_for_frequency(s.frequency) == k);
  }
  CHECK_THROWS_AS(stimulus_for_class(6), Error);
  CHECK_THROWS_AS(class_for_frequency(10.0), Error);
  CHECK(kChannelNames[static_cast<std::size_t>(left_gamma_channel())] == "PO5");
  CHECK(kChannelNames[static_cast<std::size_t>(right_gamma_channel())] == "PO6");
}

TEST_CASE("expected accuracy and quality follow the reward curves") {
  const auto curves = RewardCurves::defaults();
  CHECK(expected_accuracy({0.1, 45}, curves) == doctest::Approx(0.91));
  CHECK(expected_accuracy({0.9, 45}, curves) == doctest::Approx(0.25));
  CHECK(trial_quality({0.1, 45}, curves) == doctest::Approx(1.0));
  CHECK(trial_quality({0.1, 5}, curves) == doctest::Approx((0.91 * 0.46 / 0.91 - 1.0 / 6) / (0.91 - 1.0 / 6)));
  double prev = 2.0;
  for (double l = 0.0; l <= 1.0; l += 0.05) {
    const double q = trial_quality({l, 45}, curves);
    CHECK((q >= 0.0 && q <= 1.0));
    CHECK(q <= prev + 1e-12);
    prev = q;
  }
  CHECK(trial_quality({0.1, 40}, curves) > trial_quality({0.1, 10}, curves));
}

TEST_CASE("drive mapping") {
  SynthConfig c;
  CHECK(c.drive(0.0) == 0.0);
  CHECK(c.drive(1.0) == doctest::Approx(c.quality_gain));
  CHECK(SynthConfig::high_snr().drive(1.0) == 1.0);
  CHECK(c.drive(0.5) < c.drive(0.6));
}

TEST_CASE("a 7.5 Hz trial peaks at 7.5 and 15 Hz") {
  Rng rng(1);
  const auto e = synth_trial(1, 1.0, 4.0, SynthConfig::high_snr(), rng);
  CHECK(e.label == 1);
  CHECK(e.samples == 2000);
  const auto s = amplitude_spectrum(e.row(channel_index("Oz")), e.sample_rate);
  const auto top = s.top_bins(2, 6.0, 45.0);
  CHECK(s.frequency[top[0]] == 7.5);
  CHECK(s.frequency[top[1]] == 15.0);
}

TEST_CASE("quality 0 carries no stimulus information") {
  const SynthConfig cfg;
  for (int k = 1; k < kClasses; ++k) {
    Rng a(5), b(5);
    CHECK(synth_trial(0, 0.0, 1.0, cfg, a).data == synth_trial(k, 0.0, 1.0, cfg, b).data);
  }
  // With the same noise draw, the difference between full and zero drive is the response alone.
  Rng a(6), b(6);
  const auto full = synth_trial(2, 1.0, 2.0, SynthConfig::high_snr(), a);
  const auto none = synth_trial(2, 0.0, 2.0, SynthConfig::high_snr(), b);
  std::vector<double> diff(static_cast<std::size_t>(full.samples));
  const int oz = channel_index("Oz");
  for (int t = 0; t < full.samples; ++t) diff[static_cast<std::size_t>(t)] = full.at(oz, t) - none.at(oz, t);
  const auto s = amplitude_spectrum(diff, full.sample_rate);
  const SynthConfig hs = SynthConfig::high_snr();
  // Off-bin low-gamma tones leak slightly into these bins.
  CHECK(s.amplitude[s.bin_of(8.0)] == doctest::Approx(hs.ssvep_amplitude).epsilon(0.01));
  CHECK(s.amplitude[s.bin_of(16.0)] == doctest::Approx(hs.ssvep_amplitude * hs.harmonic_ratio).epsilon(0.01));
  CHECK(s.amplitude[s.bin_of(12.0)] < 0.01);
}

TEST_CASE("rotation direction lateralizes low-gamma power") {
  double left_minus_right_for_left = 0, left_minus_right_for_right = 0;
  const int l = left_gamma_channel(), r = right_gamma_channel();
  for (int i = 0; i < 100; ++i) {
    Rng a = make_rng(3, "lat", static_cast<std::uint64_t>(i));
    const auto el = synth_trial(0, 1.0, 2.0, SynthConfig::high_snr(), a);
    left_minus_right_for_left += band_power(el, l, kRotationBand) - band_power(el, r, kRotationBand);
    const auto er = synth_trial(1, 1.0, 2.0, SynthConfig::high_snr(), a);
    left_minus_right_for_right += band_power(er, l, kRotationBand) - band_power(er, r, kRotationBand);
  }
  CHECK(left_minus_right_for_left > 0.0);
  CHECK(left_minus_right_for_right < 0.0);
}

TEST_CASE("datasets are interleaved, labelled and reproducible") {
  const auto a = synth_dataset(2, 0.8, 0.5, SynthConfig{}, 9);
  const auto b = synth_dataset(2, 0.8, 0.5, SynthConfig{}, 9);
  REQUIRE(a.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == static_cast<int>(i % 6));
    CHECK(a[i].channels == kChannels);
    CHECK(a[i].data == b[i].data);
  }
  CHECK(synth_dataset(2, 0.8, 0.5, SynthConfig{}, 10)[0].data != a[0].data);
  Rng rng(1);
  CHECK_THROWS_AS(synth_trial(0, 1.0, 0.0, SynthConfig{}, rng), Error);
}
