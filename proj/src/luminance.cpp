#include "saslo/luminance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saslo/error.hpp"
#include "saslo/kernels.hpp"

namespace saslo {

RgbFrame::RgbFrame(int w, int h) : width(w), height(h) {
  require(w > 0 && h > 0, "frame dimensions must be positive");
  pixels.assign(3 * pixel_count(), 0);
}

RgbFrame::RgbFrame(int w, int h, std::vector<std::uint8_t> data)
    : width(w), height(h), pixels(std::move(data)) {
  validate();
}

Rgb8 RgbFrame::at(int x, int y) const {
  const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
  return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void RgbFrame::set(int x, int y, Rgb8 c) {
  const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
  pixels[i] = c.r;
  pixels[i + 1] = c.g;
  pixels[i + 2] = c.b;
}

void RgbFrame::validate() const {
  require(width > 0 && height > 0, "frame dimensions must be positive");
  require(pixels.size() == 3 * pixel_count(),
          "frame has " + std::to_string(pixels.size()) + " bytes, expected " +
              std::to_string(3 * pixel_count()));
}

LuminanceMap::LuminanceMap(int w, int h, double fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

LuminanceMap::LuminanceMap(int w, int h, std::vector<double> v)
    : width(w), height(h), values(std::move(v)) {
  require(values.size() == static_cast<std::size_t>(w) * h, "luminance map size mismatch");
}

LuminanceGrid::LuminanceGrid(int n, double fill)
    : n_g(n), cells(static_cast<std::size_t>(n) * n, fill) {}

double linearize(std::uint8_t component, double gamma) {
  return std::pow(component / 255.0, gamma);
}

LinearRgb linearize(Rgb8 px, double gamma) {
  return {linearize(px.r, gamma), linearize(px.g, gamma), linearize(px.b, gamma)};
}

LinearFrame linearize(const RgbFrame& frame, double gamma) {
  frame.validate();
  const auto lut = kernels::make_gamma_lut(gamma);
  LinearFrame out{frame.width, frame.height, std::vector<double>(frame.pixels.size())};
  for (std::size_t i = 0; i < frame.pixels.size(); ++i) out.values[i] = lut[frame.pixels[i]];
  return out;
}

Xyz to_xyz(const LinearRgb& px) {
  const auto& m = kRgbToXyz;
  return {m[0][0] * px.r + m[0][1] * px.g + m[0][2] * px.b,
          m[1][0] * px.r + m[1][1] * px.g + m[1][2] * px.b,
          m[2][0] * px.r + m[2][1] * px.g + m[2][2] * px.b};
}

double pixel_luminance(const LinearRgb& px) {
  return 0.2126 * px.r + 0.7152 * px.g + 0.0722 * px.b;
}

LuminanceMap raw_luminance(const RgbFrame& frame, const LuminanceConfig& cfg) {
  frame.validate();
  const auto lut = kernels::make_gamma_lut(cfg.gamma);
  LuminanceMap map(frame.width, frame.height);
  if (cfg.parallel)
    kernels::omp::luminance(frame.pixels, lut, map.values);
  else
    kernels::serial::luminance(frame.pixels, lut, map.values);
  return map;
}

LuminanceMap normalize(LuminanceMap raw) {
  if (raw.values.empty()) return raw;
  const auto [lo_it, hi_it] = std::minmax_element(raw.values.begin(), raw.values.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  if (!(span > 0.0)) {
    std::fill(raw.values.begin(), raw.values.end(), 0.0);
    return raw;
  }
  for (double& v : raw.values) v = std::clamp((v - lo) / span, 0.0, 1.0);
  return raw;
}

ClipLuminance average_clip(std::span<const LuminanceMap> maps) {
  require(!maps.empty(), "average_clip needs at least one map");
  const int w = maps.front().width;
  const int h = maps.front().height;
  LuminanceMap mean(w, h);
  for (const auto& m : maps) {
    require(m.width == w && m.height == h, "average_clip: map dimensions differ");
    for (std::size_t i = 0; i < mean.values.size(); ++i) mean.values[i] += m.values[i];
  }
  const double inv = 1.0 / static_cast<double>(maps.size());
  for (double& v : mean.values) v *= inv;
  return {std::move(mean), static_cast<int>(maps.size())};
}

LuminanceGrid discretize(const ClipLuminance& clip, int n_g, bool parallel) {
  const auto& m = clip.map;
  require(n_g >= 2, "grid size must be at least 2");
  require(n_g <= m.width && n_g <= m.height,
          "grid size " + std::to_string(n_g) + " exceeds map dimensions " +
              std::to_string(m.width) + "x" + std::to_string(m.height));
  LuminanceGrid grid(n_g);
  if (parallel)
    kernels::omp::cell_means(m.values, m.width, m.height, n_g, grid.cells);
  else
    kernels::serial::cell_means(m.values, m.width, m.height, n_g, grid.cells);
  return grid;
}

ClipLuminance estimate_clip(std::span<const RgbFrame> frames, const LuminanceConfig& cfg) {
  require(!frames.empty(), "no frames to estimate luminance from");
  std::vector<LuminanceMap> maps;
  maps.reserve(frames.size());
  for (const auto& f : frames) maps.push_back(normalize(raw_luminance(f, cfg)));
  return average_clip(maps);
}

LuminanceGrid estimate_grid(std::span<const RgbFrame> frames, const LuminanceConfig& cfg) {
  return discretize(estimate_clip(frames, cfg), cfg.grid_size, cfg.parallel);
}

}  // namespace saslo
