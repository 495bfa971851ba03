#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// `serial` and an OpenMP version in `omp` with the same signature; the two
// are required to agree bit-for-bit (tests/unit/test_kernels.cpp) and are
// compared for speed in bench/.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace saslo::kernels {

using GammaLut = std::array<double, 256>;

GammaLut make_gamma_lut(double gamma);

// Grid position of one stimulus, stored flat as (col, row) pairs per layout.
struct CellIndex {
  std::int32_t col = 0;
  std::int32_t row = 0;
};

namespace serial {

// out[i] = CIE Y of pixel i. rgb holds 3 * out.size() bytes.
void luminance(std::span<const std::uint8_t> rgb, const GammaLut& lut, std::span<double> out);

// Mean of every grid cell over a width x height map; cells is n_g * n_g.
void cell_means(std::span<const double> map, int width, int height, int n_g,
                std::span<double> cells);

// scores[k] = x_k . theta + lambda * sqrt(x_k^T A^-1 x_k) for row-major
// feature rows x_k of length dim. a_inv is dim x dim row-major.
void ucb_scores(std::span<const double> features, std::size_t dim,
                std::span<const double> theta, std::span<const double> a_inv, double lambda,
                std::span<double> scores);

// Farthest-first step: for every pool entry, min_dist = min(min_dist,
// d(pool_k, picked)), where d sums Euclidean cell distances over stimuli.
// Returns the index with the largest updated min_dist (lowest index on ties).
std::size_t farthest_first_update(std::span<const CellIndex> pool, std::size_t n_stimuli,
                                  std::span<const CellIndex> picked, std::span<double> min_dist);

// "Same" linear-phase FIR filtering of `rows` independent rows of length n,
// with the group delay (taps.size()-1)/2 removed. Zero padding at both ends.
// Only every step-th output is computed: out holds rows x ceil(n / step).
void fir_rows(std::span<const double> in, std::size_t rows, std::size_t n,
              std::span<const double> taps, std::size_t step, std::span<double> out);

}  // namespace serial

namespace omp {

void luminance(std::span<const std::uint8_t> rgb, const GammaLut& lut, std::span<double> out);
void cell_means(std::span<const double> map, int width, int height, int n_g,
                std::span<double> cells);
void ucb_scores(std::span<const double> features, std::size_t dim,
                std::span<const double> theta, std::span<const double> a_inv, double lambda,
                std::span<double> scores);
std::size_t farthest_first_update(std::span<const CellIndex> pool, std::size_t n_stimuli,
                                  std::span<const CellIndex> picked, std::span<double> min_dist);
void fir_rows(std::span<const double> in, std::size_t rows, std::size_t n,
              std::span<const double> taps, std::size_t step, std::span<double> out);

}  // namespace omp

}  // namespace saslo::kernels
