#include "saslo/ring_buffer.hpp"

#include <cmath>

namespace saslo {

RingBuffer::RingBuffer(int channels, std::size_t capacity, double sample_rate)
    : channels_(channels), capacity_(capacity), sample_rate_(sample_rate) {
  require(channels >= 1, "ring buffer needs at least one channel");
  require(capacity >= 1, "ring buffer capacity must be positive");
  require(sample_rate > 0.0, "sample rate must be positive");
  data_ = std::make_unique<std::atomic<double>[]>(static_cast<std::size_t>(channels) * capacity);
  for (std::size_t i = 0; i < static_cast<std::size_t>(channels) * capacity; ++i)
    data_[i].store(0.0, std::memory_order_relaxed);
}

std::uint64_t RingBuffer::oldest() const {
  const std::uint64_t p = published();
  return p > capacity_ ? p - capacity_ : 0;
}

void RingBuffer::append(const EegEpoch& chunk) {
  if (chunk.channels != channels_)
    fail(ErrorKind::kInput, "chunk has " + std::to_string(chunk.channels) + " channels, buffer holds " +
                                std::to_string(channels_));
  const std::uint64_t start = published_.load(std::memory_order_relaxed);
  const auto k = static_cast<std::uint64_t>(chunk.samples);
  reserved_.store(start + k, std::memory_order_relaxed);
  std::atomic_thread_fence(std::memory_order_release);
  for (int c = 0; c < channels_; ++c) {
    std::atomic<double>* row = data_.get() + static_cast<std::size_t>(c) * capacity_;
    for (std::uint64_t i = 0; i < k; ++i)
      row[(start + i) % capacity_].store(chunk.at(c, static_cast<int>(i)), std::memory_order_relaxed);
  }
  published_.store(start + k, std::memory_order_release);
}

EegEpoch RingBuffer::read(std::uint64_t start, std::size_t count) const {
  const std::uint64_t end = start + count;
  const std::uint64_t p = published_.load(std::memory_order_acquire);
  if (end > p)
    throw RangeError(RangeError::Reason::kFuture, "requested samples [" + std::to_string(start) + ", " +
                                                      std::to_string(end) + ") extend past the " +
                                                      std::to_string(p) + " samples written so far");
  if (p > capacity_ && start < p - capacity_)
    throw RangeError(RangeError::Reason::kOverwritten,
                     "requested sample " + std::to_string(start) + " has been overwritten (oldest resident is " +
                         std::to_string(p - capacity_) + ")");
  EegEpoch out(channels_, static_cast<int>(count), sample_rate_);
  for (int c = 0; c < channels_; ++c) {
    const std::atomic<double>* row = data_.get() + static_cast<std::size_t>(c) * capacity_;
    for (std::size_t i = 0; i < count; ++i)
      out.at(c, static_cast<int>(i)) = row[(start + i) % capacity_].load(std::memory_order_relaxed);
  }
  // Anything the writer started after our first check is visible through
  // reserved_; if it reached into our range the copy may be torn.
  std::atomic_thread_fence(std::memory_order_acquire);
  const std::uint64_t r = reserved_.load(std::memory_order_relaxed);
  if (r > capacity_ && start < r - capacity_)
    throw RangeError(RangeError::Reason::kOverwritten,
                     "samples from " + std::to_string(start) + " were overwritten while being read");
  return out;
}

EegEpoch RingBuffer::extract_epoch(std::uint64_t start_sample, EpochWindow window) const {
  require(window.offset_s >= 0.0 && window.length_s > 0.0, "epoch window must have non-negative offset and positive length");
  const auto offset = static_cast<std::uint64_t>(std::llround(window.offset_s * sample_rate_));
  const auto length = static_cast<std::size_t>(std::llround(window.length_s * sample_rate_));
  require(length >= 1, "epoch window shorter than one sample");
  return read(start_sample + offset, length);
}

void append_chunk(RingBuffer& buffer, const EegEpoch& chunk) { buffer.append(chunk); }

EegEpoch extract_epoch(const RingBuffer& buffer, std::uint64_t start_sample, EpochWindow window) {
  return buffer.extract_epoch(start_sample, window);
}

}  // namespace saslo
