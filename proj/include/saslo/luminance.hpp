#pragma once

// Scene luminance estimation: sRGB frames -> normalized perceptual luminance
// maps -> clip average -> coarse grid used as bandit context.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace saslo {

inline constexpr double kDefaultGamma = 2.2;
inline constexpr int kDefaultGridSize = 12;
inline constexpr int kDefaultClipFrames = 30;  // 1 s at 30 fps

// Linear RGB -> CIE 1931 XYZ with the standard sRGB primary coefficients.
inline constexpr std::array<std::array<double, 3>, 3> kRgbToXyz = {{
    {0.4124, 0.3576, 0.1805},
    {0.2126, 0.7152, 0.0722},
    {0.0193, 0.1192, 0.9505},
}};

struct Rgb8 {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct LinearRgb {
  double r = 0.0, g = 0.0, b = 0.0;
};

struct Xyz {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Row-major interleaved 8-bit sRGB.
struct RgbFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 3 * width * height

  RgbFrame() = default;
  RgbFrame(int w, int h);
  RgbFrame(int w, int h, std::vector<std::uint8_t> data);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  Rgb8 at(int x, int y) const;
  void set(int x, int y, Rgb8 c);
  void validate() const;
};

struct LinearFrame {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // interleaved R, G, B in [0, 1]
};

struct LuminanceMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major

  LuminanceMap() = default;
  LuminanceMap(int w, int h, double fill = 0.0);
  LuminanceMap(int w, int h, std::vector<double> v);

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct ClipLuminance {
  LuminanceMap map;
  int frame_count = 0;
};

// Square grid of mean luminance values; cell (col, row) stored row-major.
struct LuminanceGrid {
  int n_g = 0;
  std::vector<double> cells;

  LuminanceGrid() = default;
  LuminanceGrid(int n, double fill = 0.0);

  double at(int col, int row) const { return cells[static_cast<std::size_t>(row) * n_g + col]; }
  double& at(int col, int row) { return cells[static_cast<std::size_t>(row) * n_g + col]; }
  bool contains(int col, int row) const {
    return col >= 0 && row >= 0 && col < n_g && row < n_g;
  }
};

struct LuminanceConfig {
  double gamma = kDefaultGamma;
  int grid_size = kDefaultGridSize;
  bool parallel = true;
};

double linearize(std::uint8_t component, double gamma = kDefaultGamma);
LinearRgb linearize(Rgb8 px, double gamma = kDefaultGamma);
LinearFrame linearize(const RgbFrame& frame, double gamma = kDefaultGamma);

Xyz to_xyz(const LinearRgb& px);
double pixel_luminance(const LinearRgb& px);

// Per-pixel CIE Y of a frame, before normalization.
LuminanceMap raw_luminance(const RgbFrame& frame, const LuminanceConfig& cfg = {});

// Min-max normalization over the whole map. A constant map becomes all zeros.
LuminanceMap normalize(LuminanceMap raw);

ClipLuminance average_clip(std::span<const LuminanceMap> maps);

LuminanceGrid discretize(const ClipLuminance& clip, int n_g, bool parallel = true);

// Full pipeline: each frame is normalized on its own, then the clip is
// averaged.
ClipLuminance estimate_clip(std::span<const RgbFrame> frames, const LuminanceConfig& cfg = {});
LuminanceGrid estimate_grid(std::span<const RgbFrame> frames, const LuminanceConfig& cfg = {});

}  // namespace saslo
