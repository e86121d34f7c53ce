#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "meedav/error.hpp"
#include "meedav/ingest/records.hpp"

namespace meedav::align {

inline constexpr double grid_rate_hz = 256.0;

/// Uniform time axis: `length` points at start + i * step.
struct UniformAxis {
  double start = 0.0;
  double step = 1.0 / grid_rate_hz;
  std::size_t length = 0;

  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double end() const { return length == 0 ? start : at(length - 1); }

  /// Axis starting at 0 with the given step covering [0, duration]:
  /// floor(duration / step) + 1 points.
  static UniformAxis covering(double duration_s, double step) {
    const auto n = static_cast<std::size_t>(std::floor(duration_s / step + 1e-9)) + 1;
    return {0.0, step, n};
  }

  friend bool operator==(const UniformAxis&, const UniformAxis&) = default;
};

/// Shifts timestamps to start at zero and converts them to seconds.
/// Milliseconds are divided by 1000 (not multiplied by 1e-3) so that exact
/// millisecond grids map onto exact binary fractions of a second.
inline std::vector<double> to_relative_seconds(std::span<const double> timestamps, ingest::TimeUnit unit) {
  if (timestamps.empty()) fail(ErrorCode::empty_input, "no timestamps");
  std::vector<double> out(timestamps.size());
  const double origin = timestamps.front();
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    if (i > 0 && timestamps[i] < timestamps[i - 1])
      fail(ErrorCode::non_monotonic_timestamps, "timestamp " + std::to_string(i) + " decreases");
    out[i] = unit == ingest::TimeUnit::seconds ? timestamps[i] - origin : (timestamps[i] - origin) / 1000.0;
  }
  return out;
}

namespace detail {

// Collapses runs of equal times to the mean of their values.
inline void collapse_duplicates(std::span<const double> times, std::span<const double> values,
                                std::vector<double>& t_out, std::vector<double>& v_out) {
  t_out.clear();
  v_out.clear();
  std::size_t i = 0;
  while (i < times.size()) {
    if (i > 0 && times[i] < times[i - 1])
      fail(ErrorCode::non_monotonic_timestamps, "sample times must be non-decreasing");
    std::size_t j = i + 1;
    double sum = values[i];
    while (j < times.size() && times[j] == times[i]) sum += values[j++];
    t_out.push_back(times[i]);
    v_out.push_back(j - i == 1 ? values[i] : sum / static_cast<double>(j - i));
    i = j;
  }
}

}  // namespace detail

/// Piecewise-linear interpolation of (times, values) at every axis point.
/// Points outside the sampled span hold the nearest boundary value.
inline std::vector<double> resample_linear(std::span<const double> times, std::span<const double> values,
                                           const UniformAxis& axis) {
  if (times.size() != values.size())
    fail(ErrorCode::length_mismatch, "times and values differ in length");
  std::vector<double> t, v;
  detail::collapse_duplicates(times, values, t, v);
  if (t.size() < 2) fail(ErrorCode::insufficient_data, "need at least 2 distinct time points");

  std::vector<double> out(axis.length);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < axis.length; ++i) {
    const double q = axis.at(i);
    if (q <= t.front()) {
      out[i] = v.front();
      continue;
    }
    if (q >= t.back()) {
      out[i] = v.back();
      continue;
    }
    if (q < t[seg]) seg = 0;  // axis is increasing, so this only happens for odd axes
    while (t[seg + 1] <= q) ++seg;
    const double t0 = t[seg], t1 = t[seg + 1];
    out[i] = v[seg] + (v[seg + 1] - v[seg]) * ((q - t0) / (t1 - t0));
  }
  return out;
}

/// Divides by the peak magnitude; silence stays silent.
inline std::vector<double> normalize_audio(std::span<const double> samples) {
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  std::vector<double> out(samples.begin(), samples.end());
  if (peak > 0.0)
    for (auto& s : out) s /= peak;
  return out;
}

inline constexpr double screen_width_px = 1280.0;
inline constexpr double screen_height_px = 1024.0;

struct ScreenPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const ScreenPoint&, const ScreenPoint&) = default;
};

/// Gaze coordinates are taken to be screen pixels already; this clamps them
/// to the 1280 x 1024 display.
inline ScreenPoint map_gaze_to_screen(double x, double y) {
  return {std::clamp(x, 0.0, screen_width_px), std::clamp(y, 0.0, screen_height_px)};
}

}  // namespace meedav::align
