#include "saslo/fir.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "saslo/error.hpp"
#include "saslo/kernels.hpp"

namespace saslo {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<double> design_bandpass(Band band, double sample_rate, int order) {
  require(sample_rate > 0.0, "sample rate must be positive");
  require(order >= 2 && order % 2 == 0, "FIR order must be even and at least 2");
  require(band.low_hz > 0.0 && band.high_hz > band.low_hz && band.high_hz < sample_rate / 2.0,
          "band edges must satisfy 0 < low < high < Nyquist");
  const double f1 = band.low_hz / sample_rate;
  const double f2 = band.high_hz / sample_rate;
  const int m = order;
  std::vector<double> h(m + 1);
  for (int n = 0; n <= m; ++n) {
    const double k = n - m / 2.0;
    const double ideal = 2.0 * f2 * sinc(2.0 * f2 * k) - 2.0 * f1 * sinc(2.0 * f1 * k);
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / m);
    h[n] = ideal * window;
  }
  const double centre = 0.5 * (band.low_hz + band.high_hz);
  const double g = fir_gain(h, centre, sample_rate);
  for (double& v : h) v /= g;
  return h;
}

double fir_gain(const std::vector<double>& taps, double f_hz, double sample_rate) {
  std::complex<double> acc = 0.0;
  const double w = 2.0 * std::numbers::pi * f_hz / sample_rate;
  for (std::size_t n = 0; n < taps.size(); ++n) acc += taps[n] * std::polar(1.0, -w * static_cast<double>(n));
  return std::abs(acc);
}

EegEpoch apply_fir(const EegEpoch& epoch, const std::vector<double>& taps, bool parallel) {
  return filter_decimate(epoch, taps, 1, parallel);
}

EegEpoch filter_decimate(const EegEpoch& epoch, const std::vector<double>& taps, int step, bool parallel) {
  epoch.validate();
  require(step >= 1, "decimation step must be >= 1");
  require(!taps.empty(), "FIR needs at least one tap");
  const auto rows = static_cast<std::size_t>(epoch.channels);
  const auto n = static_cast<std::size_t>(epoch.samples);
  const int m = (epoch.samples + step - 1) / step;
  EegEpoch out(epoch.channels, m, epoch.sample_rate / step, epoch.label);
  if (parallel)
    kernels::omp::fir_rows(epoch.data, rows, n, taps, static_cast<std::size_t>(step), out.data);
  else
    kernels::serial::fir_rows(epoch.data, rows, n, taps, static_cast<std::size_t>(step), out.data);
  return out;
}

EegEpoch bandpass(const EegEpoch& epoch, Band band, int order, bool parallel) {
  return apply_fir(epoch, design_bandpass(band, epoch.sample_rate, order), parallel);
}

}  // namespace saslo
