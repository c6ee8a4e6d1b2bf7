#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gphc {

enum class error_kind {
  scheme_invalid,
  unsorted_times,
  length_mismatch,
  parse_error,
  io_error,
  missing_mle,
  degenerate_denominator,
  cancellation_overflow,
  out_of_domain,
  numerical_failure,
  nonintegrable_mean,
  nonintegrable_variance,
  improper_posterior,
};

inline std::string_view to_string(error_kind kind) {
  switch (kind) {
    case error_kind::scheme_invalid: return "SchemeInvalid";
    case error_kind::unsorted_times: return "UnsortedTimes";
    case error_kind::length_mismatch: return "LengthMismatch";
    case error_kind::parse_error: return "ParseError";
    case error_kind::io_error: return "IoError";
    case error_kind::missing_mle: return "MissingMle";
    case error_kind::degenerate_denominator: return "DegenerateDenominator";
    case error_kind::cancellation_overflow: return "CancellationOverflow";
    case error_kind::out_of_domain: return "OutOfDomain";
    case error_kind::numerical_failure: return "NumericalFailure";
    case error_kind::nonintegrable_mean: return "NonintegrableMean";
    case error_kind::nonintegrable_variance: return "NonintegrableVariance";
    case error_kind::improper_posterior: return "ImproperPosterior";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit code.
class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  error_kind kind() const noexcept { return kind_; }

  /// True for failures caused by bad input rather than by the numerics.
  bool is_validation() const noexcept {
    switch (kind_) {
      case error_kind::scheme_invalid:
      case error_kind::unsorted_times:
      case error_kind::length_mismatch:
      case error_kind::parse_error:
      case error_kind::io_error:
      case error_kind::missing_mle:
      case error_kind::out_of_domain:
      case error_kind::improper_posterior:
      case error_kind::nonintegrable_mean:
      case error_kind::nonintegrable_variance:
        return true;
      default:
        return false;
    }
  }

 private:
  error_kind kind_;
};

class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& reason)
      : error(error_kind::parse_error, "line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gphc
