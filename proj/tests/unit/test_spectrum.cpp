#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "saslo/rng.hpp"
#include "saslo/spectrum.hpp"

using namespace saslo;

namespace {

// Direct O(N^2) single-sided amplitude spectrum.
std::vector<double> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> s = 0;
    for (std::size_t t = 0; t < n; ++t)
      s += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n));
    double a = std::abs(s) / static_cast<double>(n);
    if (k != 0 && !(n % 2 == 0 && k == n / 2)) a *= 2.0;
    out[k] = a;
  }
  return out;
}

std::vector<double> tone(double f, double amp, std::size_t n, double fs) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = amp * std::sin(2 * std::numbers::pi * f * static_cast<double>(t) / fs);
  return x;
}

}  // namespace

TEST_CASE("amplitude spectrum matches a direct DFT") {
  Rng rng(1);
  std::normal_distribution<double> g(0, 1);
  for (std::size_t n : {64u, 101u, 500u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    const auto s = amplitude_spectrum(x, 250.0);
    const auto ref = direct_dft(x);
    REQUIRE(s.amplitude.size() == ref.size());
    CHECK(s.bin_width == doctest::Approx(250.0 / static_cast<double>(n)));
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(s.amplitude[k] == doctest::Approx(ref[k]).epsilon(1e-9));
      CHECK(s.frequency[k] == doctest::Approx(static_cast<double>(k) * s.bin_width));
    }
  }
}

TEST_CASE("unit tone on an exact bin") {
  const auto s = amplitude_spectrum(tone(10, 1, 1000, 500), 500);
  const auto k = s.bin_of(10.0);
  CHECK(s.frequency[k] == 10.0);
  CHECK(s.amplitude[k] == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 0; i < s.amplitude.size(); ++i)
    if (i != k) CHECK(s.amplitude[i] < 1e-6);
}

TEST_CASE("constant signal and superposition") {
  const auto c = amplitude_spectrum(std::vector<double>(200, 3.0), 100);
  CHECK(c.amplitude[0] == doctest::Approx(3.0));
  for (std::size_t i = 1; i < c.amplitude.size(); ++i) CHECK(c.amplitude[i] < 1e-12);

  const auto a = tone(7.5, 0.7, 2000, 500);
  const auto b = tone(15, 0.3, 2000, 500);
  std::vector<double> sum(2000);
  for (std::size_t i = 0; i < 2000; ++i) sum[i] = a[i] + b[i];
  const auto sa = amplitude_spectrum(a, 500), sb = amplitude_spectrum(b, 500), ss = amplitude_spectrum(sum, 500);
  for (std::size_t i = 0; i < ss.amplitude.size(); ++i)
    CHECK(ss.amplitude[i] == doctest::Approx(sa.amplitude[i] + sb.amplitude[i]).epsilon(1e-9));
}

TEST_CASE("Parseval consistency") {
  Rng rng(2);
  std::normal_distribution<double> g(0, 1);
  for (std::size_t n : {128u, 255u}) {
    std::vector<double> x(n);
    double ms = 0;
    for (auto& v : x) {
      v = g(rng) + 0.5;
      ms += v * v / static_cast<double>(n);
    }
    const auto s = amplitude_spectrum(x, 100);
    double total = s.amplitude[0] * s.amplitude[0];
    for (std::size_t k = 1; k < s.amplitude.size(); ++k) {
      const bool nyquist = n % 2 == 0 && k == n / 2;
      total += nyquist ? s.amplitude[k] * s.amplitude[k] : s.amplitude[k] * s.amplitude[k] / 2;
    }
    CHECK(total == doctest::Approx(ms).epsilon(1e-9));
  }
}

TEST_CASE("top bins, averaging and CSV") {
  std::vector<double> x = tone(7.5, 1.0, 2000, 500);
  const auto h = tone(15, 0.6, 2000, 500);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += h[i];
  const auto s = amplitude_spectrum(x, 500);
  const auto top = s.top_bins(2, 1.0, 100.0);
  REQUIRE(top.size() == 2);
  CHECK(s.frequency[top[0]] == 7.5);
  CHECK(s.frequency[top[1]] == 15.0);
  CHECK(s.top_bins(3, 10.0, 20.0).front() == s.bin_of(15.0));

  std::vector<Spectrum> parts{s, s};
  parts[1].amplitude.assign(s.amplitude.size(), 0.0);
  const auto avg = average_spectra(parts);
  CHECK(avg.amplitude[s.bin_of(7.5)] == doctest::Approx(0.5));

  const auto csv = spectrum_to_csv(s);
  CHECK(csv.rfind("frequency,amplitude\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == s.amplitude.size() + 1);
}
