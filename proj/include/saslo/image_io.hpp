#pragma once

#include <filesystem>
#include <string>

#include "saslo/luminance.hpp"

namespace saslo {

// Binary PPM (P6, maxval 255).
RgbFrame read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbFrame& frame);

// Raw interleaved RGB24 dump. A file may hold several consecutive frames.
std::vector<RgbFrame> read_rgb24(const std::filesystem::path& path, int width, int height);

// 16-bit binary PGM (P5, maxval 65535, big-endian samples). Values are
// clamped to [0, 1] before quantization.
void write_pgm16(const std::filesystem::path& path, const LuminanceMap& map);
LuminanceMap read_pgm16(const std::filesystem::path& path);

// Grid as a JSON array of row arrays, fixed notation with 6 decimals.
std::string grid_to_json(const LuminanceGrid& grid);
LuminanceGrid grid_from_json(const std::string& text);

}  // namespace saslo
