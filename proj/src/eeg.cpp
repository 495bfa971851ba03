#include "saslo/eeg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "saslo/error.hpp"

namespace saslo {

static_assert(std::endian::native == std::endian::little, "epoch files assume a little-endian host");

int channel_index(std::string_view name) {
  for (int c = 0; c < kChannels; ++c)
    if (kChannelNames[c] == name) return c;
  fail("unknown channel " + std::string(name));
}

EegEpoch::EegEpoch(int c, int t, double fs, int lbl)
    : channels(c), samples(t), sample_rate(fs), label(lbl),
      data(static_cast<std::size_t>(std::max(c, 0)) * std::max(t, 0), 0.0) {
  require(c > 0 && t > 0, "epoch must have at least one channel and one sample");
  require(fs > 0.0, "sample rate must be positive");
}

void EegEpoch::validate() const {
  require(channels > 0 && samples > 0, "epoch must have at least one channel and one sample");
  require(data.size() == static_cast<std::size_t>(channels) * samples, "epoch data size mismatch");
  require(sample_rate > 0.0, "sample rate must be positive");
  require(label >= -1 && label < kClasses, "epoch label out of range");
  for (double v : data) require(std::isfinite(v), "epoch contains non-finite samples");
}

namespace {

constexpr char kMagic[4] = {'E', 'E', 'G', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in, const std::string& name) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) fail(ErrorKind::kInput, name + ": truncated epoch file");
  return v;
}

}  // namespace

void write_epoch(const std::filesystem::path& path, const EegEpoch& epoch) {
  epoch.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kInput, "cannot write " + path.string());
  out.write(kMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(epoch.channels));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(epoch.samples));
  put<float>(out, static_cast<float>(epoch.sample_rate));
  put<std::int32_t>(out, epoch.label);
  std::vector<float> buf(epoch.data.begin(), epoch.data.end());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

EegEpoch read_epoch(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string name = path.string();
  if (!in) fail(ErrorKind::kInput, "cannot open " + name);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) fail(ErrorKind::kInput, name + ": not an epoch file");
  const auto c = get<std::uint32_t>(in, name);
  const auto t = get<std::uint32_t>(in, name);
  const auto fs = get<float>(in, name);
  const auto label = get<std::int32_t>(in, name);
  if (c == 0 || t == 0 || c > 4096 || t > (1u << 26) || !(fs > 0.0f) || label < -1 || label >= kClasses)
    fail(ErrorKind::kInput, name + ": invalid epoch header");
  std::vector<float> buf(static_cast<std::size_t>(c) * t);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float))))
    fail(ErrorKind::kInput, name + ": truncated epoch data");
  EegEpoch e(static_cast<int>(c), static_cast<int>(t), fs, label);
  std::copy(buf.begin(), buf.end(), e.data.begin());
  return e;
}

std::vector<EegEpoch> read_epoch_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) fail(ErrorKind::kInput, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".eeg") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<EegEpoch> out;
  for (const auto& f : files) out.push_back(read_epoch(f));
  return out;
}

void average_reference(EegEpoch& epoch) {
  for (int t = 0; t < epoch.samples; ++t) {
    double mean = 0.0;
    for (int c = 0; c < epoch.channels; ++c) mean += epoch.at(c, t);
    mean /= epoch.channels;
    for (int c = 0; c < epoch.channels; ++c) epoch.at(c, t) -= mean;
  }
}

void remove_artifacts(EegEpoch& /*epoch*/) {}

}  // namespace saslo
