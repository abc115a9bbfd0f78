#pragma once

#include <stdexcept>
#include <string>

namespace bitune {

enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  io = 3,
  unreachable = 4,
  limit_exceeded = 5,
  internal = 6,
};

/// Exception type thrown across the library. The code survives the trip
/// through the C API as a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_invalid(const std::string& what);
[[noreturn]] void throw_parse(const std::string& what);
[[noreturn]] void throw_io(const std::string& what);

}  // namespace bitune
