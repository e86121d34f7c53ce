#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "meedav/error.hpp"

namespace meedav::analytics {

struct Envelope {
  std::vector<double> times;  // frame centres, seconds
  std::vector<double> values;
};

/// Root-mean-square of non-overlapping frames of round(frame_s * rate)
/// samples; the last frame may be shorter.
inline Envelope frame_rms(std::span<const double> samples, double sample_rate, double frame_s) {
  if (samples.empty()) fail(ErrorCode::empty_input, "no audio samples");
  if (!(frame_s > 0.0) || !(sample_rate > 0.0)) fail(ErrorCode::bad_parameter, "frame and rate must be positive");
  const auto frame = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(frame_s * sample_rate)));

  Envelope env;
  for (std::size_t begin = 0; begin < samples.size(); begin += frame) {
    const auto end = std::min(samples.size(), begin + frame);
    double sum_sq = 0.0;
    for (auto i = begin; i < end; ++i) sum_sq += samples[i] * samples[i];
    const double rms = std::sqrt(sum_sq / static_cast<double>(end - begin));
    env.times.push_back((static_cast<double>(begin) + static_cast<double>(end - begin - 1) / 2.0) / sample_rate);
    env.values.push_back(rms);
  }
  return env;
}

/// Frame RMS peak-normalized to 1; silence stays all zeros.
inline Envelope audio_envelope(std::span<const double> samples, double sample_rate, double frame_s) {
  auto env = frame_rms(samples, sample_rate, frame_s);
  const double peak = *std::max_element(env.values.begin(), env.values.end());
  if (peak > 0.0)
    for (auto& v : env.values) v /= peak;
  return env;
}

}  // namespace meedav::analytics
