#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace strata {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  non_smooth_point,
  domain_violation,
  sign_violation,
  empty_sample,
  degenerate_domain,
  unsupported_excision,
  alpha_out_of_range,
  zero_denominator,
  unsupported,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::non_smooth_point: return "NonSmoothPoint";
    case ErrorKind::domain_violation: return "DomainViolation";
    case ErrorKind::sign_violation: return "SignViolation";
    case ErrorKind::empty_sample: return "EmptySample";
    case ErrorKind::degenerate_domain: return "DegenerateDomain";
    case ErrorKind::unsupported_excision: return "UnsupportedExcision";
    case ErrorKind::alpha_out_of_range: return "AlphaOutOfRange";
    case ErrorKind::zero_denominator: return "ZeroDenominator";
    case ErrorKind::unsupported: return "Unsupported";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace strata
