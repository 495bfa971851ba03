#pragma once

// Line protocol for trial events over a stream socket (UTF-8, LF-terminated,
// space-delimited):
//   START <trial_id> <target_class> <sample_index>
//   END <trial_id> <sample_index>
// The server answers END with RESULT <trial_id> <predicted_class> and any
// rejected line with ERR <reason>. START produces no reply when accepted.
// One trial may be in flight per connection.

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace saslo {

struct TrialEvent {
  enum class Kind { kStart, kEnd };
  Kind kind = Kind::kStart;
  std::string trial_id;
  int target_class = -1;  // START only
  std::uint64_t sample_index = 0;
};

std::string format_event(const TrialEvent& event);  // without the trailing LF

struct ParsedLine {
  std::optional<TrialEvent> event;
  std::string error;  // ERR reason when event is empty
};

ParsedLine parse_event(std::string_view line);

// Per-connection state machine; transport-free so it can be tested directly.
class ProtocolMachine {
 public:
  using Decode = std::function<int(const TrialEvent& start, const TrialEvent& end)>;
  explicit ProtocolMachine(Decode decode, int n_classes = 6);

  // Reply line (without LF) or nothing.
  std::optional<std::string> handle_line(std::string_view line);
  bool in_flight() const { return pending_.has_value(); }

 private:
  Decode decode_;
  int n_classes_;
  std::optional<TrialEvent> pending_;
};

// Loopback TCP listener. Each accepted connection gets its own ProtocolMachine
// and worker thread; the decode callback must be safe to call from them.
class EventServer {
 public:
  explicit EventServer(ProtocolMachine::Decode decode, std::uint16_t port = 0, int n_classes = 6);
  ~EventServer();
  EventServer(const EventServer&) = delete;
  EventServer& operator=(const EventServer&) = delete;

  std::uint16_t port() const { return port_; }
  void stop();

 private:
  void accept_loop();
  void serve(int fd);

  ProtocolMachine::Decode decode_;
  int n_classes_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

class EventClient {
 public:
  EventClient(const std::string& host, std::uint16_t port, int timeout_ms = 10000);
  ~EventClient();
  EventClient(const EventClient&) = delete;
  EventClient& operator=(const EventClient&) = delete;

  void send_line(const std::string& line);
  void send_event(const TrialEvent& event);
  // Next LF-terminated line; protocol error on timeout or closed connection.
  std::string read_line();

  // START + END, then waits for the RESULT. ERR replies and RESULTs for
  // another trial raise protocol errors.
  int run_trial(const std::string& trial_id, int target_class, std::uint64_t start_sample,
                std::uint64_t end_sample);

 private:
  int fd_ = -1;
  int timeout_ms_;
  std::string buffer_;
};

}  // namespace saslo
