#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "meedav/align/resample.hpp"
#include "meedav/analytics/envelope.hpp"
#include "meedav/error.hpp"
#include "meedav/ingest/dataset.hpp"

namespace meedav::align {

/// An eye-tracker event onset: where and when a run of equally labelled
/// samples begins.
struct EventMarker {
  double time_s = 0.0;
  ingest::GazeEvent event;
  ScreenPoint position;
};

/// Every modality of one trial on the shared 256 Hz grid. Self-contained:
/// nothing downstream needs to read input files again.
struct AlignedTrial {
  ingest::TrialKey key;
  UniformAxis grid;
  std::vector<std::string> channel_names;
  std::vector<std::vector<double>> eeg;  // channel-major, microvolts
  std::optional<std::vector<double>> gaze_x;
  std::optional<std::vector<double>> gaze_y;
  std::vector<EventMarker> gaze_events;
  std::optional<std::vector<double>> audio;           // peak-normalized waveform
  std::optional<std::vector<double>> audio_envelope;  // frame RMS of the full-rate audio
  std::vector<bool> validity;                         // empty until analytics fills it

  bool has_gaze() const { return gaze_x.has_value(); }
  bool has_audio() const { return audio.has_value(); }
  double duration_s() const { return grid.end(); }
  std::size_t length() const { return grid.length; }
};

struct AlignOptions {
  double envelope_frame_s = 0.01;
  double min_overlap_fraction = 0.10;
};

struct AlignResult {
  AlignedTrial trial;
  std::vector<std::string> warnings;
};

namespace detail {

inline double overlap_fraction(double begin, double end, double span) {
  const double lo = std::max(begin, 0.0), hi = std::min(end, span);
  return hi > lo ? (hi - lo) / span : 0.0;
}

inline std::vector<double> seconds_since(const std::vector<double>& ts, double origin, ingest::TimeUnit unit) {
  std::vector<double> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    out[i] = unit == ingest::TimeUnit::seconds ? ts[i] - origin : (ts[i] - origin) / 1000.0;
  return out;
}

inline std::size_t distinct_count(const std::vector<double>& t) {
  std::size_t n = t.empty() ? 0 : 1;
  for (std::size_t i = 1; i < t.size(); ++i) n += t[i] != t[i - 1];
  return n;
}

}  // namespace detail

/// Resamples every present modality onto one grid spanning the EEG recording.
/// Gaze and audio that cover less than `min_overlap_fraction` of the EEG span
/// are dropped with a DisjointSpans warning.
inline AlignResult align_trial(const ingest::TrialKey& key, const ingest::EegRecord& eeg,
                               const std::optional<ingest::GazeRecord>& gaze,
                               const std::optional<ingest::AudioRecord>& audio, const AlignOptions& opts = {}) {
  if (eeg.timestamps.empty()) fail(ErrorCode::insufficient_data, "EEG record is empty");
  const auto eeg_t = to_relative_seconds(eeg.timestamps, eeg.native_unit);
  const double span = eeg_t.back();
  if (!(span > 0.0)) fail(ErrorCode::insufficient_data, "EEG spans zero time");

  AlignResult result;
  auto& out = result.trial;
  out.key = key;
  out.grid = UniformAxis::covering(span, 1.0 / grid_rate_hz);
  for (const auto& ch : eeg.channels) {
    out.channel_names.push_back(ch.name);
    out.eeg.push_back(resample_linear(eeg_t, ch.samples, out.grid));
  }

  const double origin = eeg.timestamps.front();
  if (gaze) {
    const auto t = detail::seconds_since(gaze->timestamps, origin, gaze->native_unit);
    const double cover = t.empty() ? 0.0 : detail::overlap_fraction(t.front(), t.back(), span);
    if (detail::distinct_count(t) < 2) {
      result.warnings.push_back("InsufficientData: gaze has fewer than 2 distinct samples, dropped");
    } else if (cover < opts.min_overlap_fraction) {
      result.warnings.push_back("DisjointSpans: gaze covers " + std::to_string(cover * 100.0) +
                                "% of the EEG span, dropped");
    } else {
      auto x = resample_linear(t, gaze->x, out.grid);
      auto y = resample_linear(t, gaze->y, out.grid);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = map_gaze_to_screen(x[i], y[i]);
        x[i] = p.x;
        y[i] = p.y;
      }
      out.gaze_x = std::move(x);
      out.gaze_y = std::move(y);
      const std::optional<ingest::GazeEvent>* previous = nullptr;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& ev = gaze->events[i];
        const bool onset = ev && (!previous || !*previous || **previous != *ev);
        previous = &ev;
        if (!onset || t[i] < 0.0 || t[i] > span) continue;
        out.gaze_events.push_back({t[i], *ev, map_gaze_to_screen(gaze->x[i], gaze->y[i])});
      }
    }
  }

  if (audio) {
    const auto n = audio->samples.size();
    const double last = n == 0 ? 0.0 : static_cast<double>(n - 1) / audio->sample_rate;
    const double cover = detail::overlap_fraction(0.0, last, span);
    if (n < 2) {
      result.warnings.push_back("InsufficientData: audio has fewer than 2 samples, dropped");
    } else if (cover < opts.min_overlap_fraction) {
      result.warnings.push_back("DisjointSpans: audio covers " + std::to_string(cover * 100.0) +
                                "% of the EEG span, dropped");
    } else {
      std::vector<double> t(n);
      for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / audio->sample_rate;
      out.audio = resample_linear(t, normalize_audio(audio->samples), out.grid);
      const auto env = analytics::audio_envelope(audio->samples, audio->sample_rate, opts.envelope_frame_s);
      out.audio_envelope = env.times.size() >= 2 ? resample_linear(env.times, env.values, out.grid)
                                                 : std::vector<double>(out.grid.length, env.values.front());
    }
  }
  return result;
}

inline AlignResult align_trial(const ingest::LoadedTrial& loaded, const AlignOptions& opts = {}) {
  return align_trial(loaded.key, loaded.eeg, loaded.gaze, loaded.audio, opts);
}

}  // namespace meedav::align
