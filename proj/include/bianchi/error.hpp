#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bianchi {

enum class ErrorCode {
  unsupported_field,
  invalid_argument,
  pole,
  window,
  nonconvergence,
  truncation_failure,
  parse,
  duplicate_index,
  coverage_gap,
  field_mismatch,
  coverage_exceeded,
  degenerate,
  policy_mismatch,
  usage,
  verification,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable reason alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bianchi
