#pragma once

#include <span>
#include <string>
#include <vector>

namespace saslo {

struct Spectrum {
  double bin_width = 0.0;  // sample_rate / N
  std::vector<double> frequency;
  std::vector<double> amplitude;

  std::size_t bin_of(double f_hz) const;
  // Bins inside [lo, hi] ordered by decreasing amplitude.
  std::vector<std::size_t> top_bins(std::size_t count, double lo_hz, double hi_hz) const;
};

// Single-sided amplitude spectrum: a unit-amplitude sinusoid on an exact bin
// reads 1.0, a constant c reads c at bin 0, and sum(A0^2 + A_k^2 / 2) equals
// the mean square of the signal.
Spectrum amplitude_spectrum(std::span<const double> signal, double sample_rate);

// Element-wise mean of equally sized spectra.
Spectrum average_spectra(std::span<const Spectrum> spectra);

std::string spectrum_to_csv(const Spectrum& s);

}  // namespace saslo
