#include "saslo/loopback.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "saslo/protocol.hpp"

namespace saslo {

namespace {

// Streams queued segments into the buffer in 50 ms chunks.
class Writer {
 public:
  explicit Writer(RingBuffer& buffer) : buffer_(buffer), thread_([this] { run(); }) {}
  ~Writer() {
    {
      std::lock_guard lock(mutex_);
      done_ = true;
    }
    cv_.notify_all();
    thread_.join();
  }
  void push(EegEpoch segment) {
    {
      std::lock_guard lock(mutex_);
      queue_.push_back(std::move(segment));
    }
    cv_.notify_all();
  }

 private:
  void run() {
    while (true) {
      EegEpoch seg;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return done_ || !queue_.empty(); });
        if (queue_.empty()) return;
        seg = std::move(queue_.front());
        queue_.pop_front();
      }
      const int chunk = std::max(1, static_cast<int>(seg.sample_rate * 0.05));
      for (int s = 0; s < seg.samples; s += chunk) {
        const int n = std::min(chunk, seg.samples - s);
        EegEpoch part(seg.channels, n, seg.sample_rate);
        for (int c = 0; c < seg.channels; ++c) std::copy_n(seg.row(c).begin() + s, n, part.row(c).begin());
        buffer_.append(part);
      }
    }
  }

  RingBuffer& buffer_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<EegEpoch> queue_;
  bool done_ = false;
  std::thread thread_;
};

}  // namespace

LoopbackReport run_loopback(const EpochDecoder& decode, const LoopbackConfig& cfg) {
  require(cfg.trials >= 1, "loopback needs at least one trial");
  require(cfg.window.offset_s + cfg.window.length_s <= cfg.stimulation_s, "decode window exceeds the stimulation");
  RingBuffer buffer(cfg.synth.channels, static_cast<std::size_t>(kBufferSeconds * cfg.synth.sample_rate),
                    cfg.synth.sample_rate);
  LoopbackReport report;
  std::mutex report_mutex;
  const auto timeout = std::chrono::milliseconds(cfg.timeout_ms);

  EventServer server(
      [&](const TrialEvent& start, const TrialEvent& end) {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        while (buffer.published() < end.sample_index) {
          if (std::chrono::steady_clock::now() > deadline) fail(ErrorKind::kProtocol, "stream stalled");
          std::this_thread::sleep_for(std::chrono::microseconds(200));
        }
        const EegEpoch epoch = buffer.extract_epoch(start.sample_index, cfg.window);
        {
          std::lock_guard lock(report_mutex);
          report.epoch_samples = epoch.samples;
        }
        return decode(epoch);
      },
      0);

  Writer writer(buffer);
  EventClient client("127.0.0.1", server.port(), cfg.timeout_ms);
  const auto stim = static_cast<std::uint64_t>(std::llround(cfg.stimulation_s * cfg.synth.sample_rate));
  std::uint64_t queued = 0;
  for (int i = 0; i < cfg.trials; ++i) {
    const int target = i % kClasses;
    Rng rng = make_rng(cfg.seed, "loopback", static_cast<std::uint64_t>(i));
    EegEpoch lead = synth_trial(stimulus_for_class(0), 0.0, cfg.lead_s, cfg.synth, rng);
    EegEpoch trial = synth_trial(stimulus_for_class(target), cfg.quality, cfg.stimulation_s, cfg.synth, rng);
    const std::uint64_t onset = queued + static_cast<std::uint64_t>(lead.samples);
    queued = onset + static_cast<std::uint64_t>(trial.samples);
    writer.push(std::move(lead));
    writer.push(std::move(trial));
    ++report.trials;
    try {
      const int predicted = client.run_trial("t" + std::to_string(i), target, onset, onset + stim);
      ++report.results;
      if (predicted == target) ++report.correct;
    } catch (const Error& e) {
      report.error = e.what();
      break;
    }
  }
  server.stop();
  return report;
}

}  // namespace saslo
