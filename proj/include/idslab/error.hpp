#pragma once

#include <stdexcept>
#include <string>

namespace idslab {

/// Failure categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorKind {
  Argument,
  Dimension,
  Parse,
  Schema,
  Codec,
  Format,
  Io,
  Training,
  Numeric,
  Capacity,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

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

}  // namespace idslab
