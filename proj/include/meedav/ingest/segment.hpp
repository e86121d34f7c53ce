#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meedav/error.hpp"
#include "meedav/ingest/delimited.hpp"
#include "meedav/ingest/trial_key.hpp"
#include "meedav/ingest/wav.hpp"

namespace meedav::ingest {

inline constexpr double segment_sample_rate = 16000.0;

struct TrialBoundary {
  TrialKey key;
  double start_s = 0.0;
  double end_s = 0.0;
};

/// Reads a `basename,start_s,end_s` table.
inline std::vector<TrialBoundary> parse_boundaries(std::string_view text) {
  const auto table = parse_delimited(text);
  const int b = table.column("basename"), s = table.column("start_s"), e = table.column("end_s");
  if (b < 0 || s < 0 || e < 0) fail(ErrorCode::parse_error, "boundary file needs basename,start_s,end_s columns");
  std::vector<TrialBoundary> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto where = "row " + std::to_string(r + 2);
    auto key = parse_trial_basename(row[b]);
    if (key.basename() != row[b]) fail(ErrorCode::malformed_basename, where + ": '" + row[b] + "'");
    out.push_back({std::move(key), parse_number(row[s], where + ", start_s"), parse_number(row[e], where + ", end_s")});
  }
  return out;
}

/// Cuts one trial chunk per boundary out of a continuous recording. A chunk
/// holds the instants in [start, end) sampled at 16 kHz; when the source rate
/// differs, values are linearly interpolated between source samples.
inline std::vector<std::pair<TrialKey, AudioRecord>> segment_raw_audio(const AudioRecord& raw,
                                                                       const std::vector<TrialBoundary>& boundaries) {
  if (raw.sample_rate <= 0 || raw.samples.empty()) fail(ErrorCode::empty_input, "raw audio is empty");
  const double duration = raw.duration_s();
  const auto last = raw.samples.size() - 1;

  std::vector<std::pair<TrialKey, AudioRecord>> out;
  out.reserve(boundaries.size());
  for (const auto& bnd : boundaries) {
    if (!(bnd.start_s >= 0.0 && bnd.start_s < bnd.end_s && bnd.end_s <= duration))
      fail(ErrorCode::boundary_out_of_range, bnd.key.basename() + ": [" + std::to_string(bnd.start_s) + ", " +
                                                 std::to_string(bnd.end_s) + ") outside [0, " +
                                                 std::to_string(duration) + "]");
    // number of j >= 0 with start + j / rate < end
    const double span = (bnd.end_s - bnd.start_s) * segment_sample_rate;
    auto count = static_cast<std::size_t>(std::ceil(span - 1e-9));

    AudioRecord chunk;
    chunk.sample_rate = segment_sample_rate;
    chunk.samples.resize(count);
    const double ratio = raw.sample_rate / segment_sample_rate;
    const double origin = bnd.start_s * raw.sample_rate;
    for (std::size_t j = 0; j < count; ++j) {
      const double pos = origin + static_cast<double>(j) * ratio;
      const auto i0 = std::min(static_cast<std::size_t>(pos), last);
      const double frac = pos - static_cast<double>(i0);
      const double v0 = raw.samples[i0];
      chunk.samples[j] = (frac <= 0.0 || i0 == last) ? v0 : v0 + (raw.samples[i0 + 1] - v0) * frac;
    }
    out.emplace_back(bnd.key, std::move(chunk));
  }
  return out;
}

}  // namespace meedav::ingest
