#pragma once

#include <stdexcept>
#include <string>

namespace saslo {

// Broad failure categories. The CLI maps these onto stable exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kInput,     // unreadable / malformed input files
  kState,     // corrupt or incompatible bandit state / decoder model
  kProtocol,  // event protocol violations
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(what);
}

}  // namespace saslo
