#include "saslo/protocol.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "saslo/error.hpp"

namespace saslo {

namespace {

constexpr std::size_t kMaxLine = 1024;

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(' ', pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string format_event(const TrialEvent& e) {
  if (e.kind == TrialEvent::Kind::kStart)
    return "START " + e.trial_id + " " + std::to_string(e.target_class) + " " + std::to_string(e.sample_index);
  return "END " + e.trial_id + " " + std::to_string(e.sample_index);
}

ParsedLine parse_event(std::string_view line) {
  const auto tok = split_spaces(line);
  for (auto t : tok)
    if (t.empty()) return {std::nullopt, "malformed"};
  TrialEvent e;
  if (tok[0] == "START") {
    if (tok.size() != 4) return {std::nullopt, "malformed"};
    e.kind = TrialEvent::Kind::kStart;
    e.trial_id = std::string(tok[1]);
    if (!parse_number(tok[2], e.target_class) || !parse_number(tok[3], e.sample_index))
      return {std::nullopt, "malformed"};
    return {e, {}};
  }
  if (tok[0] == "END") {
    if (tok.size() != 3) return {std::nullopt, "malformed"};
    e.kind = TrialEvent::Kind::kEnd;
    e.trial_id = std::string(tok[1]);
    if (!parse_number(tok[2], e.sample_index)) return {std::nullopt, "malformed"};
    return {e, {}};
  }
  return {std::nullopt, "unknown_command"};
}

ProtocolMachine::ProtocolMachine(Decode decode, int n_classes) : decode_(std::move(decode)), n_classes_(n_classes) {
  require(static_cast<bool>(decode_), "protocol machine needs a decode callback");
}

std::optional<std::string> ProtocolMachine::handle_line(std::string_view line) {
  const ParsedLine p = parse_event(line);
  if (!p.event) return "ERR " + p.error;
  const TrialEvent& e = *p.event;
  if (e.kind == TrialEvent::Kind::kStart) {
    if (pending_) return std::string("ERR trial_in_flight");
    if (e.target_class < 0 || e.target_class >= n_classes_) return std::string("ERR bad_class");
    pending_ = e;
    return std::nullopt;
  }
  if (!pending_ || pending_->trial_id != e.trial_id) return std::string("ERR unmatched_end");
  if (e.sample_index < pending_->sample_index) return std::string("ERR sample_order");
  const TrialEvent start = *pending_;
  pending_.reset();
  int predicted = -1;
  try {
    predicted = decode_(start, e);
  } catch (const std::exception&) {
    return std::string("ERR decode_failed");
  }
  return "RESULT " + e.trial_id + " " + std::to_string(predicted);
}

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  fail(ErrorKind::kProtocol, what + ": " + std::strerror(errno));
}

void send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("send failed");
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

EventServer::EventServer(ProtocolMachine::Decode decode, std::uint16_t port, int n_classes)
    : decode_(std::move(decode)), n_classes_(n_classes) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) sys_fail("socket");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 8) < 0) {
    const int err = errno;
    ::close(listen_fd_);
    errno = err;
    sys_fail("cannot listen on port " + std::to_string(port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

EventServer::~EventServer() { stop(); }

void EventServer::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
}

void EventServer::accept_loop() {
  while (!stopping_.load()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 50) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

void EventServer::serve(int fd) {
  ProtocolMachine machine(decode_, n_classes_);
  std::string pending;
  bool overlong = false;
  char buf[512];
  try {
    while (!stopping_.load()) {
      pollfd pfd{fd, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, 50);
      if (ready < 0 && errno != EINTR) break;
      if (ready <= 0) continue;
      const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
      if (n <= 0) break;
      pending.append(buf, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = pending.find('\n')) != std::string::npos) {
        const std::string line = pending.substr(0, nl);
        pending.erase(0, nl + 1);
        if (overlong) {
          overlong = false;
          continue;
        }
        if (auto reply = machine.handle_line(line)) send_all(fd, *reply + "\n");
      }
      if (pending.size() > kMaxLine) {
        send_all(fd, "ERR line_too_long\n");
        pending.clear();
        overlong = true;
      }
    }
  } catch (const Error&) {
    // Peer went away mid-reply.
  }
  ::close(fd);
}

EventClient::EventClient(const std::string& host, std::uint16_t port, int timeout_ms) : timeout_ms_(timeout_ms) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || !res)
    fail(ErrorKind::kProtocol, "cannot resolve " + host);
  fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd_ < 0) {
    ::freeaddrinfo(res);
    sys_fail("socket");
  }
  const int rc = ::connect(fd_, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc < 0) {
    const int err = errno;
    ::close(fd_);
    errno = err;
    sys_fail("cannot connect to " + host + ":" + service);
  }
}

EventClient::~EventClient() {
  if (fd_ >= 0) ::close(fd_);
}

void EventClient::send_line(const std::string& line) { send_all(fd_, line + "\n"); }

void EventClient::send_event(const TrialEvent& event) { send_line(format_event(event)); }

std::string EventClient::read_line() {
  char buf[512];
  while (true) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, timeout_ms_);
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) fail(ErrorKind::kProtocol, "timed out waiting for a reply");
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) fail(ErrorKind::kProtocol, "server closed the connection");
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

int EventClient::run_trial(const std::string& trial_id, int target_class, std::uint64_t start_sample,
                           std::uint64_t end_sample) {
  send_event({TrialEvent::Kind::kStart, trial_id, target_class, start_sample});
  send_event({TrialEvent::Kind::kEnd, trial_id, -1, end_sample});
  const std::string reply = read_line();
  if (reply.rfind("ERR ", 0) == 0) fail(ErrorKind::kProtocol, "server rejected trial " + trial_id + ": " + reply.substr(4));
  const auto tok = split_spaces(reply);
  int predicted = -1;
  if (tok.size() != 3 || tok[0] != "RESULT" || !parse_number(tok[2], predicted))
    fail(ErrorKind::kProtocol, "unexpected reply: " + reply);
  if (tok[1] != trial_id) fail(ErrorKind::kProtocol, "RESULT for unknown trial " + std::string(tok[1]));
  return predicted;
}

}  // namespace saslo
