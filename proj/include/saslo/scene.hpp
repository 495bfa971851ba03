#pragma once

// Synthetic outdoor-like scenes standing in for captured AR video clips.

#include <string>
#include <vector>

#include "saslo/luminance.hpp"
#include "saslo/rng.hpp"

namespace saslo {

enum class SceneKind {
  kMixed,        // sky/ground gradient with bright and dark blobs
  kUniformDark,  // constant dark frame
  kHalfSplit,    // left half dark, right half bright
};

SceneKind parse_scene_kind(const std::string& name);
std::string to_string(SceneKind kind);

struct SceneConfig {
  int width = 192;
  int height = 108;
  int frames = kDefaultClipFrames;
};

// One clip of `cfg.frames` frames. Mixed scenes carry small per-frame
// brightness flicker and sensor noise; uniform scenes are exactly constant.
std::vector<RgbFrame> synth_scene(SceneKind kind, const SceneConfig& cfg, Rng& rng);

}  // namespace saslo
