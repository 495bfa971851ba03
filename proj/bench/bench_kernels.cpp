// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick a
// kernel; OMP_NUM_THREADS controls the parallel side.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "saslo/kernels.hpp"

namespace k = saslo::kernels;

namespace {

std::vector<double> random_doubles(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <auto Fn>
void luminance(benchmark::State& state) {
  const std::size_t pixels = static_cast<std::size_t>(state.range(0)) * state.range(0) * 16 / 9;
  std::vector<std::uint8_t> rgb(3 * pixels);
  std::mt19937 rng(1);
  for (auto& b : rgb) b = static_cast<std::uint8_t>(rng());
  const auto lut = k::make_gamma_lut(2.2);
  std::vector<double> out(pixels);
  for (auto _ : state) {
    Fn(rgb, lut, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pixels));
}

template <auto Fn>
void cell_means(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0)), w = h * 16 / 9;
  const auto map = random_doubles(static_cast<std::size_t>(w) * h, 0, 1, 2);
  std::vector<double> cells(144);
  for (auto _ : state) {
    Fn(map, w, h, 12, cells);
    benchmark::DoNotOptimize(cells.data());
  }
}

template <auto Fn>
void ucb_scores(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), dim = 18;
  const auto x = random_doubles(n * dim, 0, 1, 3);
  const auto theta = random_doubles(dim, -1, 1, 4);
  std::vector<double> a_inv(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) a_inv[i * dim + i] = 0.01;
  std::vector<double> scores(n);
  for (auto _ : state) {
    Fn(x, dim, theta, a_inv, 0.5, scores);
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Fn>
void farthest_first(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), stimuli = 6;
  std::mt19937 rng(5);
  std::vector<k::CellIndex> pool(n * stimuli);
  for (auto& c : pool) c = {static_cast<std::int32_t>(rng() % 12), static_cast<std::int32_t>(rng() % 12)};
  std::vector<double> min_dist(n);
  for (auto _ : state) {
    std::fill(min_dist.begin(), min_dist.end(), 1e300);
    std::size_t pick = 0;
    for (int step = 0; step < 32; ++step)
      pick = Fn(pool, stimuli, std::span(pool).subspan(pick * stimuli, stimuli), min_dist);
    benchmark::DoNotOptimize(pick);
  }
}

template <auto Fn>
void fir_rows(benchmark::State& state) {
  const std::size_t rows = 12, n = static_cast<std::size_t>(state.range(0));
  const auto in = random_doubles(rows * n, -1, 1, 6);
  const auto taps = random_doubles(181, -0.1, 0.1, 7);
  const std::size_t step = 5;
  std::vector<double> out(rows * ((n + step - 1) / step));
  for (auto _ : state) {
    Fn(in, rows, n, taps, step, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(luminance<k::serial::luminance>)->Name("luminance/serial")->Arg(108)->Arg(1080);
BENCHMARK(luminance<k::omp::luminance>)->Name("luminance/omp")->Arg(108)->Arg(1080);
BENCHMARK(cell_means<k::serial::cell_means>)->Name("cell_means/serial")->Arg(108)->Arg(1080);
BENCHMARK(cell_means<k::omp::cell_means>)->Name("cell_means/omp")->Arg(108)->Arg(1080);
BENCHMARK(ucb_scores<k::serial::ucb_scores>)->Name("ucb_scores/serial")->Arg(2000)->Arg(20000);
BENCHMARK(ucb_scores<k::omp::ucb_scores>)->Name("ucb_scores/omp")->Arg(2000)->Arg(20000);
BENCHMARK(farthest_first<k::serial::farthest_first_update>)->Name("farthest_first/serial")->Arg(4000);
BENCHMARK(farthest_first<k::omp::farthest_first_update>)->Name("farthest_first/omp")->Arg(4000);
BENCHMARK(fir_rows<k::serial::fir_rows>)->Name("fir_rows/serial")->Arg(1930)->Arg(20000);
BENCHMARK(fir_rows<k::omp::fir_rows>)->Name("fir_rows/omp")->Arg(1930)->Arg(20000);

BENCHMARK_MAIN();
