#include "saslo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace saslo::kernels {

GammaLut make_gamma_lut(double gamma) {
  GammaLut lut{};
  for (int v = 0; v < 256; ++v) lut[v] = std::pow(v / 255.0, gamma);
  return lut;
}

namespace {

inline double pixel_y(const std::uint8_t* px, const GammaLut& lut) {
  return 0.2126 * lut[px[0]] + 0.7152 * lut[px[1]] + 0.0722 * lut[px[2]];
}

inline double layout_distance(const CellIndex* a, const CellIndex* b, std::size_t n) {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = a[i].col - b[i].col;
    const double dy = a[i].row - b[i].row;
    d += std::sqrt(dx * dx + dy * dy);
  }
  return d;
}

inline double ucb_one(const double* x, std::size_t dim, const double* theta,
                      const double* a_inv, double lambda) {
  double mean = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    mean += x[i] * theta[i];
    double row = 0.0;
    for (std::size_t j = 0; j < dim; ++j) row += a_inv[i * dim + j] * x[j];
    quad += x[i] * row;
  }
  return mean + lambda * std::sqrt(std::max(quad, 0.0));
}

inline double fir_tap_sum(const double* row, std::size_t n, std::span<const double> taps,
                          std::size_t i) {
  const auto m = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t top = static_cast<std::ptrdiff_t>(i) + (m - 1) / 2;  // src index for k = 0
  const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, top - static_cast<std::ptrdiff_t>(n) + 1);
  const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(m - 1, top);
  double acc = 0.0;
  for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) acc += taps[k] * row[top - k];
  return acc;
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] > best_v) {
      best_v = v[k];
      best = k;
    }
  }
  return best;
}

}  // namespace

namespace serial {

void luminance(std::span<const std::uint8_t> rgb, const GammaLut& lut, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pixel_y(rgb.data() + 3 * i, lut);
}

void cell_means(std::span<const double> map, int width, int height, int n_g,
                std::span<double> cells) {
  std::vector<double> sums(cells.size(), 0.0);
  std::vector<std::size_t> counts(cells.size(), 0);
  for (int y = 0; y < height; ++y) {
    const int row = static_cast<int>(static_cast<long long>(y) * n_g / height);
    for (int x = 0; x < width; ++x) {
      const int col = static_cast<int>(static_cast<long long>(x) * n_g / width);
      const std::size_t c = static_cast<std::size_t>(row) * n_g + col;
      sums[c] += map[static_cast<std::size_t>(y) * width + x];
      ++counts[c];
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c)
    cells[c] = counts[c] ? sums[c] / static_cast<double>(counts[c]) : 0.0;
}

void ucb_scores(std::span<const double> features, std::size_t dim,
                std::span<const double> theta, std::span<const double> a_inv, double lambda,
                std::span<double> scores) {
  for (std::size_t k = 0; k < scores.size(); ++k)
    scores[k] = ucb_one(features.data() + k * dim, dim, theta.data(), a_inv.data(), lambda);
}

std::size_t farthest_first_update(std::span<const CellIndex> pool, std::size_t n_stimuli,
                                  std::span<const CellIndex> picked, std::span<double> min_dist) {
  for (std::size_t k = 0; k < min_dist.size(); ++k) {
    const double d = layout_distance(pool.data() + k * n_stimuli, picked.data(), n_stimuli);
    if (d < min_dist[k]) min_dist[k] = d;
  }
  return argmax(min_dist);
}

void fir_rows(std::span<const double> in, std::size_t rows, std::size_t n,
              std::span<const double> taps, std::size_t step, std::span<double> out) {
  const std::size_t m = (n + step - 1) / step;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < m; ++j) out[r * m + j] = fir_tap_sum(in.data() + r * n, n, taps, j * step);
}

}  // namespace serial

namespace omp {

void luminance(std::span<const std::uint8_t> rgb, const GammaLut& lut, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = pixel_y(rgb.data() + 3 * i, lut);
}

void cell_means(std::span<const double> map, int width, int height, int n_g,
                std::span<double> cells) {
  // One task per grid row: pixel rows never straddle two grid rows, so every
  // cell sum is accumulated in the same order as the serial reference.
#pragma omp parallel for schedule(static)
  for (int row = 0; row < n_g; ++row) {
    std::vector<double> sums(n_g, 0.0);
    std::vector<std::size_t> counts(n_g, 0);
    for (int y = 0; y < height; ++y) {
      if (static_cast<int>(static_cast<long long>(y) * n_g / height) != row) continue;
      for (int x = 0; x < width; ++x) {
        const int col = static_cast<int>(static_cast<long long>(x) * n_g / width);
        sums[col] += map[static_cast<std::size_t>(y) * width + x];
        ++counts[col];
      }
    }
    for (int col = 0; col < n_g; ++col)
      cells[static_cast<std::size_t>(row) * n_g + col] =
          counts[col] ? sums[col] / static_cast<double>(counts[col]) : 0.0;
  }
}

void ucb_scores(std::span<const double> features, std::size_t dim,
                std::span<const double> theta, std::span<const double> a_inv, double lambda,
                std::span<double> scores) {
  const auto n = static_cast<std::ptrdiff_t>(scores.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k)
    scores[k] = ucb_one(features.data() + k * dim, dim, theta.data(), a_inv.data(), lambda);
}

std::size_t farthest_first_update(std::span<const CellIndex> pool, std::size_t n_stimuli,
                                  std::span<const CellIndex> picked, std::span<double> min_dist) {
  const auto n = static_cast<std::ptrdiff_t>(min_dist.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const double d = layout_distance(pool.data() + k * n_stimuli, picked.data(), n_stimuli);
    if (d < min_dist[k]) min_dist[k] = d;
  }
  return argmax(min_dist);
}

void fir_rows(std::span<const double> in, std::size_t rows, std::size_t n,
              std::span<const double> taps, std::size_t step, std::span<double> out) {
  const std::size_t m = (n + step - 1) / step;
  const auto total = static_cast<std::ptrdiff_t>(rows * m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const std::size_t r = static_cast<std::size_t>(idx) / m;
    const std::size_t j = static_cast<std::size_t>(idx) % m;
    out[idx] = fir_tap_sum(in.data() + r * n, n, taps, j * step);
  }
}

}  // namespace omp

}  // namespace saslo::kernels
