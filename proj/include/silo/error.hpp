#pragma once

#include <stdexcept>
#include <string>

namespace silo {

enum class ErrorKind {
  InvalidArgument,
  Validation,
  Parse,
  TooLarge,
  Infeasible,
  Io,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace silo
