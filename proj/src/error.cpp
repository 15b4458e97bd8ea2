#include "bianchi/error.hpp"

namespace bianchi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::unsupported_field: return "unsupported-field";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::pole: return "pole";
    case ErrorCode::window: return "window";
    case ErrorCode::nonconvergence: return "nonconvergence";
    case ErrorCode::truncation_failure: return "truncation-failure";
    case ErrorCode::parse: return "parse";
    case ErrorCode::duplicate_index: return "duplicate-index";
    case ErrorCode::coverage_gap: return "coverage-gap";
    case ErrorCode::field_mismatch: return "field-mismatch";
    case ErrorCode::coverage_exceeded: return "coverage-exceeded";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::policy_mismatch: return "policy-mismatch";
    case ErrorCode::usage: return "usage";
    case ErrorCode::verification: return "verification";
  }
  return "unknown";
}

}  // namespace bianchi
