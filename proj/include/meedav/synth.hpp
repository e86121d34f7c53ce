#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "meedav/denoise/ica.hpp"
#include "meedav/error.hpp"
#include "meedav/format.hpp"
#include "meedav/ingest/dataset.hpp"
#include "meedav/ingest/wav.hpp"

namespace meedav::synth {

using denoise::Matrix;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Sum of narrow Gaussian bumps (ocular-blink-like), unit height.
inline double blink_wave(double t, const std::vector<double>& centres, double width_s) {
  double v = 0.0;
  for (double c : centres) {
    const double d = (t - c) / width_s;
    if (std::abs(d) < 8.0) v += std::exp(-0.5 * d * d);
  }
  return v;
}

/// Two known sources (a sinusoid and a sparse spike train) mixed by a known
/// 2 x 2 matrix.
struct TwoSourceFixture {
  Matrix sources;  // 2 x T
  Matrix mixing;   // 2 x 2
  Matrix mixed;    // mixing * sources
};

inline TwoSourceFixture two_source_fixture(std::uint64_t seed = 1, std::size_t samples = 7680, double rate = 256.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> spikes;
  const double duration = static_cast<double>(samples) / rate;
  for (double t = 0.4 + uniform(rng); t < duration - 0.2; t += 0.8 + 1.5 * uniform(rng)) spikes.push_back(t);

  TwoSourceFixture f;
  f.sources.resize(2, static_cast<Eigen::Index>(samples));
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / rate;
    f.sources(0, static_cast<Eigen::Index>(i)) = std::sin(two_pi * 7.0 * t);
    f.sources(1, static_cast<Eigen::Index>(i)) = blink_wave(t, spikes, 0.02);
  }
  f.mixing.resize(2, 2);
  f.mixing << 1.0, 0.7, 0.45, 1.2;
  f.mixed = f.mixing * f.sources;
  return f;
}

/// Four channels built from three sinusoidal carriers, then contaminated by
/// one shared spike source with per-channel weights.
struct ContaminatedEeg {
  Matrix carriers;      // uncontaminated, 4 x T
  Matrix contaminated;  // carriers + weights * spike
  std::vector<double> spike;
};

inline ContaminatedEeg contaminated_eeg(std::uint64_t seed = 2, std::size_t samples = 7680, double rate = 256.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double duration = static_cast<double>(samples) / rate;
  std::vector<double> blinks;
  for (double t = 0.5 + uniform(rng); t < duration - 0.3; t += 1.5 + 2.0 * uniform(rng)) blinks.push_back(t);

  const double freqs[3] = {6.0, 10.0, 17.5};
  Matrix mix(4, 3);
  mix << 20, 8, 5, 6, 18, 9, 7, 10, 16, 15, 4, 12;
  const double weights[4] = {40, 150, 140, 35};

  ContaminatedEeg out;
  out.carriers.resize(4, static_cast<Eigen::Index>(samples));
  out.contaminated.resize(4, static_cast<Eigen::Index>(samples));
  out.spike.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / rate;
    out.spike[i] = blink_wave(t, blinks, 0.04);
    for (int c = 0; c < 4; ++c) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += mix(c, k) * std::sin(two_pi * freqs[k] * t + 0.7 * k);
      const auto j = static_cast<Eigen::Index>(i);
      out.carriers(c, j) = v;
      out.contaminated(c, j) = v + weights[c] * out.spike[i];
    }
  }
  return out;
}

struct SynthOptions {
  std::uint64_t seed = 1;
  int trials = 2;
  double duration_s = 8.0;
};

inline const std::vector<std::string>& muse_channels() {
  static const std::vector<std::string> names{"RAW_TP9", "RAW_AF7", "RAW_AF8", "RAW_TP10"};
  return names;
}

inline std::string two_digits(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }
inline std::string three_digits(int v) { return (v < 100 ? "0" : "") + two_digits(v); }

inline ingest::TrialKey synthetic_key(int index) {
  return {"P" + two_digits(1 + index / 2), "S" + three_digits(1 + index), two_digits(1 + index % 2),
          index % 2 == 0 ? "Read" : "Translate"};
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    fail(ErrorCode::io_error, "cannot write " + path.string());
}

}  // namespace detail

/// Writes a small dataset with known ground truth: four-channel EEG made of
/// three sinusoidal rhythms plus blink spikes, a scripted reading scan path
/// with labelled fixations and saccades, and tone-burst audio.
/// Layout: `trials/{eeg,et,audio}/<basename>.<suffix>` plus `meedav.manifest`
/// and `ground_truth.json` at the root.
inline void write_synthetic_dataset(const std::filesystem::path& out, const SynthOptions& opts) {
  if (opts.trials < 0) fail(ErrorCode::bad_parameter, "trial count must be non-negative");
  ingest::DatasetManifest manifest;
  manifest.layout = "trials/{modality}/*";
  detail::write_file(out / std::string(ingest::manifest_filename), manifest.serialize());

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  nlohmann::ordered_json truth;
  truth["seed"] = opts.seed;
  truth["trials"] = nlohmann::ordered_json::array();

  const double eeg_rate = 256.0;
  for (int index = 0; index < opts.trials; ++index) {
    const auto key = synthetic_key(index);
    const auto base = key.basename();
    const double t0_ms = 1.65e12 + 60000.0 * index;
    const auto n_eeg = static_cast<std::size_t>(opts.duration_s * eeg_rate) + 1;

    // EEG sources: three rhythms and a blink train
    const double freqs[3] = {6.0 + uniform(rng), 9.5 + uniform(rng), 17.0 + 2.0 * uniform(rng)};
    const double phases[3] = {two_pi * uniform(rng), two_pi * uniform(rng), two_pi * uniform(rng)};
    std::vector<double> blinks;
    for (double t = 0.6 + uniform(rng); t < opts.duration_s - 0.4; t += 1.4 + 1.6 * uniform(rng)) blinks.push_back(t);
    Matrix mixing(4, 4);
    mixing << 14, 6, 4, 25,   //
        5, 16, 7, 110,        //
        6, 8, 15, 105,        //
        13, 5, 10, 22;
    for (Eigen::Index r = 0; r < 4; ++r)
      for (Eigen::Index c = 0; c < 4; ++c) mixing(r, c) *= 0.9 + 0.2 * uniform(rng);
    const double baseline[4] = {830, 845, 838, 826};

    Matrix sources(4, static_cast<Eigen::Index>(n_eeg));
    std::string eeg = "TimeStamp";
    for (const auto& ch : muse_channels()) eeg += "," + ch;
    eeg += "\n";
    for (std::size_t i = 0; i < n_eeg; ++i) {
      const double t = static_cast<double>(i) / eeg_rate;
      const auto j = static_cast<Eigen::Index>(i);
      for (int k = 0; k < 3; ++k) sources(k, j) = std::sin(two_pi * freqs[k] * t + phases[k]);
      sources(3, j) = blink_wave(t, blinks, 0.05);
      eeg += format_double(t0_ms + static_cast<double>(i) * (1000.0 / eeg_rate));
      for (Eigen::Index c = 0; c < 4; ++c) {
        const double v = baseline[c] + mixing.row(c).dot(sources.col(j)) + 0.3 * normal(rng);
        eeg += "," + format_double(std::round(v * 1000.0) / 1000.0);
      }
      eeg += "\n";
    }
    detail::write_file(out / "trials" / "eeg" / (base + manifest.eeg_suffix), eeg);

    // Gaze: read three lines left to right, then glance down at the image.
    struct Segment {
      double start, end;
      double x0, y0, x1, y1;
      bool fixation;
    };
    std::vector<Segment> path;
    double t = 0.02 + 0.03 * uniform(rng);
    double x = 180, y = 300;
    int line = 0;
    while (t < opts.duration_s - 0.05) {
      const double fix = 0.18 + 0.08 * uniform(rng);
      path.push_back({t, t + fix, x, y, x, y, true});
      t += fix;
      double nx = x + 110 + 40 * uniform(rng), ny = y;
      if (nx > 1100) {
        line = (line + 1) % 4;
        nx = 180;
        ny = line == 3 ? 800 : 300 + 60 * line;
      }
      const double sac = 0.03 + 0.01 * uniform(rng);
      path.push_back({t, t + sac, x, y, nx, ny, false});
      t += sac;
      x = nx;
      y = ny;
    }
    const double gaze_rate = 500.0;
    const double gaze_start = path.front().start;
    const double gaze_end = std::min(path.back().end, opts.duration_s - 0.01);
    std::string et = "TimeStamp,X,Y,Event\n";
    std::size_t seg = 0;
    for (auto i = static_cast<long>(std::ceil(gaze_start * gaze_rate)); i / gaze_rate <= gaze_end; ++i) {
      const double ts = static_cast<double>(i) / gaze_rate;
      while (seg + 1 < path.size() && ts >= path[seg].end) ++seg;
      const auto& s = path[seg];
      const double a = std::clamp((ts - s.start) / (s.end - s.start), 0.0, 1.0);
      const double jitter = s.fixation ? 1.5 : 0.0;
      const double gx = s.x0 + (s.x1 - s.x0) * a + jitter * normal(rng);
      const double gy = s.y0 + (s.y1 - s.y0) * a + jitter * normal(rng);
      et += format_double(t0_ms + static_cast<double>(i) * 2.0) + "," + format_double(std::round(gx * 10) / 10) + "," +
            format_double(std::round(gy * 10) / 10) + "," + (s.fixation ? "FIXATION" : "SACCADE") + "\n";
    }
    detail::write_file(out / "trials" / "et" / (base + manifest.gaze_suffix), et);

    // Audio: 16 kHz tone bursts while "speaking"
    ingest::AudioRecord audio{16000.0, std::vector<double>(static_cast<std::size_t>(opts.duration_s * 16000.0))};
    std::vector<std::pair<double, double>> bursts;
    for (double b = 0.5 + 0.5 * uniform(rng); b < opts.duration_s - 1.0; b += 2.0 + uniform(rng))
      bursts.emplace_back(b, b + 0.8 + 0.6 * uniform(rng));
    const double tone = 180.0 + 60.0 * uniform(rng);
    for (std::size_t i = 0; i < audio.samples.size(); ++i) {
      const double ts = static_cast<double>(i) / audio.sample_rate;
      double v = 0.002 * normal(rng);
      for (const auto& [b0, b1] : bursts) {
        if (ts < b0 || ts >= b1) continue;
        const double ramp = std::min({1.0, (ts - b0) / 0.01, (b1 - ts) / 0.01});
        v += 0.5 * ramp * std::sin(two_pi * tone * ts);
      }
      audio.samples[i] = v;
    }
    detail::write_file(out / "trials" / "audio" / (base + manifest.audio_suffix), ingest::encode_wav(audio));

    nlohmann::ordered_json entry;
    entry["basename"] = base;
    entry["eeg"]["sample_rate_hz"] = eeg_rate;
    entry["eeg"]["channels"] = muse_channels();
    entry["eeg"]["baseline_uv"] = std::vector<double>(baseline, baseline + 4);
    entry["eeg"]["source_names"] = {"rhythm_" + format_double(freqs[0]) + "hz", "rhythm_" + format_double(freqs[1]) + "hz",
                                    "rhythm_" + format_double(freqs[2]) + "hz", "blink"};
    for (Eigen::Index r = 0; r < 4; ++r) {
      std::vector<double> row;
      for (Eigen::Index c = 0; c < 4; ++c) row.push_back(mixing(r, c));
      entry["eeg"]["mixing_uv"].push_back(row);
    }
    entry["eeg"]["blink_times_s"] = blinks;
    for (Eigen::Index r = 0; r < 4; ++r) {
      std::vector<double> row(static_cast<std::size_t>(sources.cols()));
      for (Eigen::Index c = 0; c < sources.cols(); ++c) row[static_cast<std::size_t>(c)] = sources(r, c);
      entry["eeg"]["sources"].push_back(row);
    }
    for (const auto& s : path) {
      nlohmann::ordered_json e{{"kind", s.fixation ? "fixation" : "saccade"}, {"start_s", s.start}, {"end_s", s.end},
                               {"x", s.x0}, {"y", s.y0}};
      entry["gaze"]["events"].push_back(e);
    }
    entry["audio"]["tone_hz"] = tone;
    for (const auto& [b0, b1] : bursts) entry["audio"]["bursts_s"].push_back({b0, b1});
    truth["trials"].push_back(entry);
  }
  detail::write_file(out / "ground_truth.json", truth.dump(1) + "\n");
}

}  // namespace meedav::synth
