#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "meedav/align/resample.hpp"
#include "meedav/error.hpp"

namespace meedav::analytics {

struct GazeMotion {
  std::vector<double> horizontal;  // |x_t - x_{t-1}|
  std::vector<double> vertical;    // |y_t - y_{t-1}|
  std::vector<double> magnitude;   // horizontal + vertical (L1)
};

inline GazeMotion gaze_motion_magnitude(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::length_mismatch, "gaze x and y differ in length");
  if (x.size() < 2) fail(ErrorCode::insufficient_data, "gaze motion needs at least 2 samples");
  GazeMotion m;
  const auto n = x.size() - 1;
  m.horizontal.resize(n);
  m.vertical.resize(n);
  m.magnitude.resize(n);
  for (std::size_t t = 1; t <= n; ++t) {
    m.horizontal[t - 1] = std::abs(x[t] - x[t - 1]);
    m.vertical[t - 1] = std::abs(y[t] - y[t - 1]);
    m.magnitude[t - 1] = m.horizontal[t - 1] + m.vertical[t - 1];
  }
  return m;
}

struct IntensityWindow {
  double start_s = 0.0;
  double horizontal = 0.0;
  double vertical = 0.0;
  double total = 0.0;
};

struct IntensitySeries {
  double window_s = 0.1;
  std::vector<IntensityWindow> windows;
  double peak_raw = 0.0;  // un-normalized maximum window motion sum, pixels
};

/// Sums per-sample gaze motion over fixed windows and divides horizontal,
/// vertical and total sums by the single largest total. The motion between
/// samples t-1 and t is credited to the window holding sample t, i.e. window
/// floor(axis.at(t) / window_s).
inline IntensitySeries gaze_intensity(std::span<const double> x, std::span<const double> y, const align::UniformAxis& axis,
                                      double window_s = 0.1) {
  if (!(window_s > 0.0)) fail(ErrorCode::bad_parameter, "intensity window must be positive");
  if (x.size() != axis.length) fail(ErrorCode::length_mismatch, "gaze length differs from the time axis");
  const auto motion = gaze_motion_magnitude(x, y);

  const auto window_of = [&](std::size_t i) { return static_cast<std::size_t>(std::floor((axis.at(i) - axis.start) / window_s)); };
  const std::size_t count = window_of(axis.length - 1) + 1;
  std::vector<double> h(count, 0.0), v(count, 0.0);
  for (std::size_t t = 1; t < axis.length; ++t) {
    const auto k = window_of(t);
    h[k] += motion.horizontal[t - 1];
    v[k] += motion.vertical[t - 1];
  }

  IntensitySeries out;
  out.window_s = window_s;
  double peak = 0.0;
  for (std::size_t k = 0; k < count; ++k) peak = std::max(peak, h[k] + v[k]);
  out.peak_raw = peak;
  out.windows.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto& w = out.windows[k];
    w.start_s = axis.start + static_cast<double>(k) * window_s;
    if (peak > 0.0) {
      w.horizontal = h[k] / peak;
      w.vertical = v[k] / peak;
      w.total = (h[k] + v[k]) / peak;
    }
  }
  return out;
}

}  // namespace meedav::analytics
