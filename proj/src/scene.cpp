#include "saslo/scene.hpp"

#include <algorithm>
#include <cmath>

#include "saslo/error.hpp"

namespace saslo {

SceneKind parse_scene_kind(const std::string& name) {
  if (name == "mixed") return SceneKind::kMixed;
  if (name == "dark") return SceneKind::kUniformDark;
  if (name == "split") return SceneKind::kHalfSplit;
  fail("unknown scene kind '" + name + "' (expected mixed, dark or split)");
}

std::string to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::kMixed: return "mixed";
    case SceneKind::kUniformDark: return "dark";
    case SceneKind::kHalfSplit: return "split";
  }
  return "?";
}

namespace {

struct Blob {
  double cx, cy, radius;
  double gain;  // multiplicative brightness change at the centre
  double tint[3];
};

std::vector<RgbFrame> mixed_scene(const SceneConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int w = cfg.width, h = cfg.height;
  const double sky = 0.55 + 0.4 * u(rng);
  const double ground = 0.1 + 0.35 * u(rng);
  const double horizon = 0.25 + 0.35 * u(rng);
  double base_tint[3];
  for (double& t : base_tint) t = 0.8 + 0.2 * u(rng);

  std::vector<Blob> blobs(3 + static_cast<int>(u(rng) * 5));
  for (auto& b : blobs) {
    b.cx = u(rng) * w;
    b.cy = u(rng) * h;
    b.radius = (0.08 + 0.2 * u(rng)) * w;
    b.gain = u(rng) < 0.5 ? 0.1 + 0.4 * u(rng) : 1.5 + 1.5 * u(rng);
    for (double& t : b.tint) t = 0.7 + 0.3 * u(rng);
  }

  // Static scene radiance in [0, 1] per channel.
  std::vector<double> radiance(3ull * w * h);
  for (int y = 0; y < h; ++y) {
    const double v = y / static_cast<double>(h);
    const double t = std::clamp((v - horizon) / 0.15 + 0.5, 0.0, 1.0);
    const double level = sky * (1.0 - t) + ground * t;
    for (int x = 0; x < w; ++x) {
      double px[3];
      for (int c = 0; c < 3; ++c) px[c] = level * base_tint[c];
      for (const auto& b : blobs) {
        const double dx = x - b.cx, dy = y - b.cy;
        const double k = std::exp(-(dx * dx + dy * dy) / (2.0 * b.radius * b.radius));
        for (int c = 0; c < 3; ++c) px[c] *= 1.0 + k * (b.gain * b.tint[c] - 1.0);
      }
      for (int c = 0; c < 3; ++c) radiance[3 * (static_cast<std::size_t>(y) * w + x) + c] = std::clamp(px[c], 0.0, 1.0);
    }
  }

  // Encode with the display gamma so that linearization recovers radiance.
  std::vector<double> encoded(radiance.size());
  for (std::size_t i = 0; i < radiance.size(); ++i)
    encoded[i] = 255.0 * std::pow(radiance[i], 1.0 / kDefaultGamma);

  std::normal_distribution<double> flicker(0.0, 0.02);
  // Sensor noise: triangular on [-3.6, 3.6] (sd ~1.5) from 16-bit slices of
  // one 64-bit draw.
  constexpr double kNoiseScale = 3.6 / 255.0;
  std::vector<RgbFrame> frames;
  frames.reserve(cfg.frames);
  for (int f = 0; f < cfg.frames; ++f) {
    const double gain = std::pow(std::max(1.0 + flicker(rng), 0.0), 1.0 / kDefaultGamma);
    RgbFrame frame(w, h);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < encoded.size(); ++i) {
      if (i % 4 == 0) bits = rng();
      const auto slice = static_cast<int>((bits >> (16 * (i % 4))) & 0xFFFF);
      const double noise = ((slice & 0xFF) + (slice >> 8) - 255) * kNoiseScale;
      frame.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(encoded[i] * gain + noise), 0L, 255L));
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace

std::vector<RgbFrame> synth_scene(SceneKind kind, const SceneConfig& cfg, Rng& rng) {
  require(cfg.width > 0 && cfg.height > 0 && cfg.frames > 0, "scene dimensions must be positive");
  switch (kind) {
    case SceneKind::kMixed:
      return mixed_scene(cfg, rng);
    case SceneKind::kUniformDark: {
      RgbFrame f(cfg.width, cfg.height);
      std::fill(f.pixels.begin(), f.pixels.end(), std::uint8_t{18});
      return std::vector<RgbFrame>(cfg.frames, f);
    }
    case SceneKind::kHalfSplit: {
      RgbFrame f(cfg.width, cfg.height);
      for (int y = 0; y < cfg.height; ++y)
        for (int x = 0; x < cfg.width; ++x) {
          const std::uint8_t v = x < cfg.width / 2 ? 10 : 245;
          f.set(x, y, {v, v, v});
        }
      return std::vector<RgbFrame>(cfg.frames, f);
    }
  }
  fail("unknown scene kind");
}

}  // namespace saslo
