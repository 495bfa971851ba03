#include "saslo/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "saslo/error.hpp"

namespace saslo {
namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInput, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Netpbm header tokenizer: whitespace separated, '#' comments to end of line.
class HeaderReader {
 public:
  HeaderReader(const std::vector<std::uint8_t>& data, const std::string& name)
      : data_(data), name_(name) {}

  std::string token() {
    skip_space();
    std::string tok;
    while (pos_ < data_.size() && !std::isspace(data_[pos_])) tok.push_back(static_cast<char>(data_[pos_++]));
    if (tok.empty()) fail(ErrorKind::kInput, name_ + ": truncated header");
    return tok;
  }

  int number() {
    const std::string tok = token();
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail(ErrorKind::kInput, name_ + ": bad header field '" + tok + "'");
    }
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_start() {
    if (pos_ >= data_.size()) fail(ErrorKind::kInput, name_ + ": missing raster");
    return pos_ + 1;
  }

 private:
  void skip_space() {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(data_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

void write_bytes(const std::filesystem::path& path, const std::string& header,
                 const std::vector<std::uint8_t>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kInput, "cannot write " + path.string());
  out << header;
  out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
}

}  // namespace

RgbFrame read_ppm(const std::filesystem::path& path) {
  const auto data = slurp(path);
  HeaderReader hdr(data, path.string());
  if (hdr.token() != "P6") fail(ErrorKind::kInput, path.string() + ": not a binary PPM (P6)");
  const int w = hdr.number();
  const int h = hdr.number();
  const int maxval = hdr.number();
  if (maxval != 255) fail(ErrorKind::kInput, path.string() + ": only maxval 255 is supported");
  const std::size_t start = hdr.raster_start();
  const std::size_t need = 3ull * w * h;
  if (data.size() < start + need) fail(ErrorKind::kInput, path.string() + ": truncated raster");
  return RgbFrame(w, h, std::vector<std::uint8_t>(data.begin() + start, data.begin() + start + need));
}

void write_ppm(const std::filesystem::path& path, const RgbFrame& frame) {
  frame.validate();
  write_bytes(path, "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n",
              frame.pixels);
}

std::vector<RgbFrame> read_rgb24(const std::filesystem::path& path, int width, int height) {
  require(width > 0 && height > 0, "raw frame dimensions must be positive");
  const auto data = slurp(path);
  const std::size_t frame_bytes = 3ull * width * height;
  if (data.empty() || data.size() % frame_bytes != 0)
    fail(ErrorKind::kInput, path.string() + ": size is not a multiple of one " +
                                std::to_string(width) + "x" + std::to_string(height) + " RGB24 frame");
  std::vector<RgbFrame> frames;
  for (std::size_t off = 0; off < data.size(); off += frame_bytes)
    frames.emplace_back(width, height,
                        std::vector<std::uint8_t>(data.begin() + off, data.begin() + off + frame_bytes));
  return frames;
}

void write_pgm16(const std::filesystem::path& path, const LuminanceMap& map) {
  std::vector<std::uint8_t> body;
  body.reserve(2 * map.values.size());
  for (double v : map.values) {
    const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
    body.push_back(static_cast<std::uint8_t>(q >> 8));
    body.push_back(static_cast<std::uint8_t>(q & 0xff));
  }
  write_bytes(path, "P5\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n65535\n",
              body);
}

LuminanceMap read_pgm16(const std::filesystem::path& path) {
  const auto data = slurp(path);
  HeaderReader hdr(data, path.string());
  if (hdr.token() != "P5") fail(ErrorKind::kInput, path.string() + ": not a binary PGM (P5)");
  const int w = hdr.number();
  const int h = hdr.number();
  const int maxval = hdr.number();
  if (maxval != 65535) fail(ErrorKind::kInput, path.string() + ": expected 16-bit PGM");
  const std::size_t start = hdr.raster_start();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (data.size() < start + 2 * n) fail(ErrorKind::kInput, path.string() + ": truncated raster");
  LuminanceMap map(w, h);
  for (std::size_t i = 0; i < n; ++i)
    map.values[i] = ((data[start + 2 * i] << 8) | data[start + 2 * i + 1]) / 65535.0;
  return map;
}

std::string grid_to_json(const LuminanceGrid& grid) {
  std::string out = "[";
  char buf[32];
  for (int row = 0; row < grid.n_g; ++row) {
    out += row ? ",\n [" : "[";
    for (int col = 0; col < grid.n_g; ++col) {
      std::snprintf(buf, sizeof buf, "%s%.6f", col ? ", " : "", grid.at(col, row));
      out += buf;
    }
    out += "]";
  }
  out += "]\n";
  return out;
}

LuminanceGrid grid_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, std::string("grid JSON: ") + e.what());
  }
  if (!j.is_array() || j.size() < 2) fail(ErrorKind::kInput, "grid JSON must be an array of rows");
  const int n = static_cast<int>(j.size());
  LuminanceGrid grid(n);
  for (int row = 0; row < n; ++row) {
    if (!j[row].is_array() || static_cast<int>(j[row].size()) != n)
      fail(ErrorKind::kInput, "grid JSON must be square");
    for (int col = 0; col < n; ++col) grid.at(col, row) = j[row][col].get<double>();
  }
  return grid;
}

}  // namespace saslo
