#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meedav/align/resample.hpp"
#include "meedav/align/trial.hpp"
#include "meedav/analytics/intensity.hpp"
#include "meedav/error.hpp"

namespace meedav::analytics {

enum class CorrelationMethod { pearson, kendall, spearman };
enum class CorrelationTarget { audio, gaze_intensity };

constexpr std::string_view to_string(CorrelationMethod m) {
  switch (m) {
    case CorrelationMethod::pearson: return "pearson";
    case CorrelationMethod::kendall: return "kendall";
    case CorrelationMethod::spearman: return "spearman";
  }
  return "pearson";
}

constexpr std::string_view to_string(CorrelationTarget t) {
  return t == CorrelationTarget::audio ? "audio" : "gaze_intensity";
}

inline CorrelationMethod parse_method(std::string_view s) {
  if (s == "pearson") return CorrelationMethod::pearson;
  if (s == "kendall") return CorrelationMethod::kendall;
  if (s == "spearman") return CorrelationMethod::spearman;
  fail(ErrorCode::bad_parameter, "unknown correlation method '" + std::string(s) + "'");
}

inline CorrelationTarget parse_target(std::string_view s) {
  if (s == "audio") return CorrelationTarget::audio;
  if (s == "gaze_intensity" || s == "gaze") return CorrelationTarget::gaze_intensity;
  fail(ErrorCode::bad_parameter, "unknown correlation target '" + std::string(s) + "'");
}

/// r = 1/(N-1) * sum((x - mean_x)(y - mean_y)) / (sd_x sd_y) with sample
/// standard deviations. Absent when either input is constant.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = x.size();
  if (n != y.size()) fail(ErrorCode::length_mismatch, "correlation inputs differ in length");
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  const double dof = static_cast<double>(n - 1);
  const double r = sxy / dof / (std::sqrt(sxx / dof) * std::sqrt(syy / dof));
  return std::clamp(r, -1.0, 1.0);
}

/// 1-based ranks; ties share the average of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (auto k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

/// Pearson on average ranks. Doubled ranks are integers, so the centered
/// moments are accumulated exactly and only the final ratio is rounded.
inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::length_mismatch, "correlation inputs differ in length");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const auto n1 = static_cast<long long>(x.size()) + 1;
  long long sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const long long dx = std::llround(2.0 * rx[i]) - n1, dy = std::llround(2.0 * ry[i]) - n1;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return static_cast<double>(static_cast<long double>(sxy) /
                             std::sqrt(static_cast<long double>(sxx) * static_cast<long double>(syy)));
}

/// Kendall tau-b (tie-corrected).
inline std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const auto n = x.size();
  if (n != y.size()) fail(ErrorCode::length_mismatch, "correlation inputs differ in length");
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sx = (x[i] > x[j]) - (x[i] < x[j]);
      const int sy = (y[i] > y[j]) - (y[i] < y[j]);
      if (sx == 0 && sy == 0) continue;
      if (sx == 0) ++ties_x;
      else if (sy == 0) ++ties_y;
      else if (sx == sy) ++concordant;
      else ++discordant;
    }
  }
  const auto paired = static_cast<double>(concordant + discordant);
  const double denom = std::sqrt((paired + static_cast<double>(ties_x)) * (paired + static_cast<double>(ties_y)));
  if (denom == 0.0) return std::nullopt;
  return std::clamp(static_cast<double>(concordant - discordant) / denom, -1.0, 1.0);
}

inline std::optional<double> correlate(CorrelationMethod m, std::span<const double> x, std::span<const double> y) {
  switch (m) {
    case CorrelationMethod::pearson: return pearson(x, y);
    case CorrelationMethod::kendall: return kendall_tau_b(x, y);
    case CorrelationMethod::spearman: return spearman(x, y);
  }
  return std::nullopt;
}

inline constexpr double correlation_step_s = 0.01;

struct WindowCoefficient {
  double start_s = 0.0;
  std::optional<double> coefficient;
};

struct WindowedCorrelation {
  std::vector<WindowCoefficient> windows;
  std::optional<double> mean;  // over defined windows only
};

/// Correlation over full windows of round(window_s / 10 ms) samples, advanced
/// by round(stride_s / 10 ms). Inputs are sampled every 10 ms from t = 0.
inline WindowedCorrelation windowed_correlation(std::span<const double> a, std::span<const double> b,
                                                CorrelationMethod method, double window_s, double stride_s) {
  if (a.size() != b.size()) fail(ErrorCode::length_mismatch, "correlation inputs differ in length");
  if (!(window_s > 0.0) || !(stride_s > 0.0)) fail(ErrorCode::bad_parameter, "window and stride must be positive");
  const auto window = static_cast<std::size_t>(std::lround(window_s / correlation_step_s));
  if (window < 2) fail(ErrorCode::window_too_small, "window must span at least 2 samples");
  const auto stride = static_cast<std::size_t>(std::lround(stride_s / correlation_step_s));
  if (stride < 1) fail(ErrorCode::bad_parameter, "stride must span at least 1 sample");

  WindowedCorrelation out;
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t start = 0; start + window <= a.size(); start += stride) {
    auto r = correlate(method, a.subspan(start, window), b.subspan(start, window));
    out.windows.push_back({static_cast<double>(start) * correlation_step_s, r});
    if (r) {
      sum += *r;
      ++defined;
    }
  }
  if (defined > 0) out.mean = sum / static_cast<double>(defined);
  return out;
}

struct CorrelationOptions {
  CorrelationMethod method = CorrelationMethod::pearson;
  CorrelationTarget target = CorrelationTarget::audio;
  double window_s = 1.0;
  double stride_s = 0.5;
  double intensity_window_s = 0.1;
};

struct ChannelCorrelation {
  std::string channel;
  WindowedCorrelation result;
};

struct CorrelationReport {
  CorrelationOptions options;
  bool cleaned = false;
  std::vector<ChannelCorrelation> per_channel;  // EEG file order
};

/// The target series (audio envelope or gaze-intensity total) on the 10 ms axis.
inline std::vector<double> correlation_target(const align::AlignedTrial& trial, const CorrelationOptions& opts,
                                              const align::UniformAxis& axis) {
  if (opts.target == CorrelationTarget::audio) {
    if (!trial.audio_envelope) fail(ErrorCode::missing_modality, trial.key.basename() + " has no audio");
    std::vector<double> t(trial.grid.length);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = trial.grid.at(i);
    return align::resample_linear(t, *trial.audio_envelope, axis);
  }
  if (!trial.has_gaze()) fail(ErrorCode::missing_modality, trial.key.basename() + " has no gaze");
  const auto series = gaze_intensity(*trial.gaze_x, *trial.gaze_y, trial.grid, opts.intensity_window_s);
  if (series.windows.size() < 2) return std::vector<double>(axis.length, series.windows.front().total);
  std::vector<double> t, v;
  for (const auto& w : series.windows) {
    t.push_back(w.start_s + opts.intensity_window_s / 2.0);
    v.push_back(w.total);
  }
  return align::resample_linear(t, v, axis);
}

/// Per-channel windowed correlation between EEG (raw, or `cleaned` when
/// given) and the target series, both resampled to 100 Hz.
inline CorrelationReport correlate_trial(const align::AlignedTrial& trial, const CorrelationOptions& opts,
                                         const std::vector<std::vector<double>>* cleaned = nullptr) {
  const auto axis = align::UniformAxis::covering(trial.duration_s(), correlation_step_s);
  const auto target = correlation_target(trial, opts, axis);
  const auto& eeg = cleaned ? *cleaned : trial.eeg;
  if (eeg.size() != trial.channel_names.size()) fail(ErrorCode::length_mismatch, "cleaned EEG has the wrong channel count");

  std::vector<double> t(trial.grid.length);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = trial.grid.at(i);

  CorrelationReport report;
  report.options = opts;
  report.cleaned = cleaned != nullptr;
  for (std::size_t c = 0; c < eeg.size(); ++c) {
    const auto channel = align::resample_linear(t, eeg[c], axis);
    report.per_channel.push_back(
        {trial.channel_names[c], windowed_correlation(channel, target, opts.method, opts.window_s, opts.stride_s)});
  }
  return report;
}

}  // namespace meedav::analytics
