#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace saslo {

inline constexpr double kSampleRate = 500.0;
inline constexpr int kChannels = 12;
inline constexpr int kClasses = 6;

// Occipital / parieto-occipital montage, in acquisition order.
inline constexpr std::array<std::string_view, kChannels> kChannelNames = {
    "POz", "PO8", "PO7", "PO6", "PO5", "PO4", "PO3", "PO1", "PO2", "O1", "O2", "Oz"};

int channel_index(std::string_view name);

// C x T samples, row-major (one row per channel).
struct EegEpoch {
  int channels = 0;
  int samples = 0;
  double sample_rate = kSampleRate;
  int label = -1;  // class 0..5, or -1 when unlabeled
  std::vector<double> data;

  EegEpoch() = default;
  EegEpoch(int c, int t, double fs = kSampleRate, int lbl = -1);

  double& at(int c, int t) { return data[static_cast<std::size_t>(c) * samples + t]; }
  double at(int c, int t) const { return data[static_cast<std::size_t>(c) * samples + t]; }
  std::span<double> row(int c) { return {data.data() + static_cast<std::size_t>(c) * samples, static_cast<std::size_t>(samples)}; }
  std::span<const double> row(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * samples, static_cast<std::size_t>(samples)};
  }
  double duration() const { return samples / sample_rate; }

  void validate() const;
};

// Epoch file: "EEG1", uint32 C, uint32 T, float32 sample_rate, int32 label,
// then C*T little-endian float32 in row-major order.
void write_epoch(const std::filesystem::path& path, const EegEpoch& epoch);
EegEpoch read_epoch(const std::filesystem::path& path);
std::vector<EegEpoch> read_epoch_dir(const std::filesystem::path& dir);

// Subtracts the across-channel mean at every sample.
void average_reference(EegEpoch& epoch);

// Artifact-removal slot of the preprocessing chain. Synthetic recordings carry
// no ocular or muscle artifacts, so this is the identity.
void remove_artifacts(EegEpoch& epoch);

}  // namespace saslo
