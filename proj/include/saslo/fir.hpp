#pragma once

#include <vector>

#include "saslo/eeg.hpp"

namespace saslo {

inline constexpr int kDefaultFirOrder = 250;

struct Band {
  double low_hz = 0.0;
  double high_hz = 0.0;
};

inline constexpr Band kFrequencyBand{6.0, 40.0};  // SSVEP fundamentals and harmonics
inline constexpr Band kRotationBand{35.0, 45.0};  // low-gamma rotation response

// Hamming-windowed sinc bandpass with order + 1 taps (order must be even),
// -6 dB points at the band edges, unit gain at the band centre.
std::vector<double> design_bandpass(Band band, double sample_rate, int order = kDefaultFirOrder);

// Magnitude response of `taps` at frequency f.
double fir_gain(const std::vector<double>& taps, double f_hz, double sample_rate);

// Zero-phase application (group delay removed) to every channel.
EegEpoch bandpass(const EegEpoch& epoch, Band band, int order = kDefaultFirOrder, bool parallel = true);
EegEpoch apply_fir(const EegEpoch& epoch, const std::vector<double>& taps, bool parallel = true);

// Filters and keeps every step-th sample (first sample kept); the result's
// sample rate is divided by step. The caller is responsible for the band
// lying below the reduced Nyquist frequency.
EegEpoch filter_decimate(const EegEpoch& epoch, const std::vector<double>& taps, int step, bool parallel = true);

}  // namespace saslo
