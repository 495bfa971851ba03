#include "saslo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "saslo/error.hpp"

namespace saslo {

namespace {

// FFTW's planner is not re-entrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::size_t Spectrum::bin_of(double f_hz) const {
  require(bin_width > 0.0, "empty spectrum");
  const auto k = static_cast<long>(std::lround(f_hz / bin_width));
  return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(amplitude.size()) - 1));
}

std::vector<std::size_t> Spectrum::top_bins(std::size_t count, double lo_hz, double hi_hz) const {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < frequency.size(); ++k)
    if (frequency[k] >= lo_hz - 1e-9 && frequency[k] <= hi_hz + 1e-9) idx.push_back(k);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return amplitude[a] > amplitude[b]; });
  if (idx.size() > count) idx.resize(count);
  return idx;
}

Spectrum amplitude_spectrum(std::span<const double> signal, double sample_rate) {
  require(!signal.empty(), "cannot take the spectrum of an empty signal");
  require(sample_rate > 0.0, "sample rate must be positive");
  const int n = static_cast<int>(signal.size());
  const int bins = n / 2 + 1;
  std::vector<double> in(signal.begin(), signal.end());
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  Spectrum s;
  s.bin_width = sample_rate / n;
  s.frequency.resize(bins);
  s.amplitude.resize(bins);
  for (int k = 0; k < bins; ++k) {
    const double mag = std::hypot(out[k][0], out[k][1]) / n;
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    s.frequency[k] = k * s.bin_width;
    s.amplitude[k] = unpaired ? mag : 2.0 * mag;
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return s;
}

Spectrum average_spectra(std::span<const Spectrum> spectra) {
  require(!spectra.empty(), "no spectra to average");
  Spectrum mean = spectra.front();
  for (std::size_t i = 1; i < spectra.size(); ++i) {
    require(spectra[i].amplitude.size() == mean.amplitude.size(), "spectra differ in length");
    for (std::size_t k = 0; k < mean.amplitude.size(); ++k) mean.amplitude[k] += spectra[i].amplitude[k];
  }
  for (double& a : mean.amplitude) a /= static_cast<double>(spectra.size());
  return mean;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "frequency,amplitude\n";
  char buf[64];
  for (std::size_t k = 0; k < s.amplitude.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9g\n", s.frequency[k], s.amplitude[k]);
    out += buf;
  }
  return out;
}

}  // namespace saslo
