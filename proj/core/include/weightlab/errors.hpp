#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weightlab {

enum class ErrorCode {
  InvalidArgument,
  AtomAtPoint,
  AtomicPart,
  NonRationalPower,
  SizeLimit,
  NoConvergence,
  ScaleRange,
  MonotonicityViolation,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code carries the failure class
/// so the CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace weightlab
