#pragma once

#include <stdexcept>
#include <string>

namespace stocksent {

enum class ErrorKind {
  config,       // bad configuration or arguments; not retryable
  data,         // malformed input data
  io,           // filesystem failure
  retryable,    // transient failure (network, timeout)
  auth,         // credentials missing or rejected; terminal
  unsupported,  // feature requires an input that was not supplied
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  bool retryable() const noexcept { return kind_ == ErrorKind::retryable; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace stocksent
