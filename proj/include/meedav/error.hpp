#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meedav {

enum class ErrorCode {
  malformed_basename,
  backend_unavailable,
  parse_error,
  empty_record,
  unsupported_format,
  boundary_out_of_range,
  rate_limited,
  not_found,
  network_error,
  empty_input,
  non_monotonic_timestamps,
  insufficient_data,
  disjoint_spans,
  degenerate_channel,
  degenerate_component,
  empty_points,
  length_mismatch,
  window_too_small,
  missing_modality,
  unknown_trial,
  bad_parameter,
  no_such_events,
  io_error,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_basename: return "MalformedBasename";
    case ErrorCode::backend_unavailable: return "BackendUnavailable";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::empty_record: return "EmptyRecord";
    case ErrorCode::unsupported_format: return "UnsupportedFormat";
    case ErrorCode::boundary_out_of_range: return "BoundaryOutOfRange";
    case ErrorCode::rate_limited: return "RateLimited";
    case ErrorCode::not_found: return "NotFound";
    case ErrorCode::network_error: return "NetworkError";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::non_monotonic_timestamps: return "NonMonotonicTimestamps";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::disjoint_spans: return "DisjointSpans";
    case ErrorCode::degenerate_channel: return "DegenerateChannel";
    case ErrorCode::degenerate_component: return "DegenerateComponent";
    case ErrorCode::empty_points: return "EmptyPoints";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::window_too_small: return "WindowTooSmall";
    case ErrorCode::missing_modality: return "MissingModality";
    case ErrorCode::unknown_trial: return "UnknownTrial";
    case ErrorCode::bad_parameter: return "BadParameter";
    case ErrorCode::no_such_events: return "NoSuchEvents";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// class; `what()` carries a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the remote backend when the API quota is exhausted.
class RateLimitedError : public Error {
 public:
  RateLimitedError(long long reset_epoch_s, const std::string& detail)
      : Error(ErrorCode::rate_limited, detail), reset_epoch_s_(reset_epoch_s) {}

  long long reset_epoch_s() const noexcept { return reset_epoch_s_; }

 private:
  long long reset_epoch_s_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace meedav
