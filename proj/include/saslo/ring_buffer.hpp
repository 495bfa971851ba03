#pragma once

// Single-producer / single-consumer circular EEG buffer.
//
// The writer stores a chunk and then publishes the new sample count; a reader
// only sees samples below the published count. A read that races with the
// writer overwriting its range is detected after the copy and reported as an
// overwritten-range error instead of returning torn data.

#include <atomic>
#include <cstdint>
#include <memory>

#include "saslo/eeg.hpp"
#include "saslo/error.hpp"

namespace saslo {

inline constexpr double kBufferSeconds = 8.0;

struct EpochWindow {
  double offset_s = 0.0;
  double length_s = 0.0;
};

inline constexpr EpochWindow kOfflineWindow{0.14, 3.86};  // 1930 samples at 500 Hz
inline constexpr EpochWindow kOnlineWindow{0.0, 3.0};     // 1500 samples at 500 Hz

class RangeError : public Error {
 public:
  enum class Reason { kOverwritten, kFuture };
  RangeError(Reason reason, const std::string& what) : Error(ErrorKind::kState, what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

class RingBuffer {
 public:
  explicit RingBuffer(int channels = kChannels, std::size_t capacity = static_cast<std::size_t>(kBufferSeconds * kSampleRate),
                      double sample_rate = kSampleRate);

  int channels() const { return channels_; }
  std::size_t capacity() const { return capacity_; }
  double sample_rate() const { return sample_rate_; }
  // Total samples ever appended (the next sample's index).
  std::uint64_t published() const { return published_.load(std::memory_order_acquire); }
  // Oldest sample index still resident.
  std::uint64_t oldest() const;

  // Writer side. The chunk's channel count must match.
  void append(const EegEpoch& chunk);

  // Reader side: samples [start, start + count).
  EegEpoch read(std::uint64_t start, std::size_t count) const;
  // Samples [start + round(offset * fs), ... + round(length * fs)).
  EegEpoch extract_epoch(std::uint64_t start_sample, EpochWindow window) const;

 private:
  int channels_;
  std::size_t capacity_;
  double sample_rate_;
  std::unique_ptr<std::atomic<double>[]> data_;  // channel-major, capacity per channel
  std::atomic<std::uint64_t> reserved_{0};        // bumped before a chunk is written
  std::atomic<std::uint64_t> published_{0};       // bumped after
};

// Free-function forms.
void append_chunk(RingBuffer& buffer, const EegEpoch& chunk);
EegEpoch extract_epoch(const RingBuffer& buffer, std::uint64_t start_sample, EpochWindow window);

}  // namespace saslo
