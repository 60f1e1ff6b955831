#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sentikit {

enum class ErrorKind {
  io,
  parse,
  parameter,
  validation,
  allocation,
  incomplete_annotation,
  fit,
  predict,
  divergence,
};

std::string_view to_string(ErrorKind kind);

// Every recoverable failure in the library is reported through this type; the
// CLI maps the kind onto an exit status and a one-line diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace sentikit
