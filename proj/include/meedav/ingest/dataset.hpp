#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meedav/error.hpp"
#include "meedav/ingest/delimited.hpp"
#include "meedav/ingest/records.hpp"
#include "meedav/ingest/storage.hpp"
#include "meedav/ingest/trial_key.hpp"
#include "meedav/ingest/wav.hpp"

namespace meedav::ingest {

inline constexpr std::string_view manifest_filename = "meedav.manifest";

enum class Modality { eeg, gaze, audio };

constexpr std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::eeg: return "eeg";
    case Modality::gaze: return "gaze";
    case Modality::audio: return "audio";
  }
  return "eeg";
}

/// Directory word substituted for `{modality}` in a layout pattern.
constexpr std::string_view layout_word(Modality m) {
  switch (m) {
    case Modality::eeg: return "eeg";
    case Modality::gaze: return "et";
    case Modality::audio: return "audio";
  }
  return "eeg";
}

/// Optional per-dataset settings read from `meedav.manifest` at the root.
struct DatasetManifest {
  TimeUnit timestamp_unit = TimeUnit::milliseconds;
  std::string eeg_suffix = ".eeg";
  std::string gaze_suffix = ".et";
  std::string audio_suffix = ".wav";
  std::optional<std::string> layout;

  const std::string& suffix(Modality m) const {
    return m == Modality::eeg ? eeg_suffix : m == Modality::gaze ? gaze_suffix : audio_suffix;
  }

  std::string serialize() const {
    std::string out = "timestamp_unit=";
    out += timestamp_unit == TimeUnit::milliseconds ? "ms" : "s";
    out += "\neeg_suffix=" + eeg_suffix + "\ngaze_suffix=" + gaze_suffix + "\naudio_suffix=" + audio_suffix + "\n";
    if (layout) out += "layout=" + *layout + "\n";
    return out;
  }
};

inline DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest m;
  std::size_t start = 0, line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::parse_error, "manifest line " + std::to_string(line_no) + ": expected key=value");
    auto key = detail::trim(line.substr(0, eq));
    auto value = std::string(detail::trim(line.substr(eq + 1)));
    if (key == "timestamp_unit") {
      if (value == "ms") m.timestamp_unit = TimeUnit::milliseconds;
      else if (value == "s") m.timestamp_unit = TimeUnit::seconds;
      else fail(ErrorCode::parse_error, "manifest: timestamp_unit must be 'ms' or 's'");
    } else if (key == "eeg_suffix") {
      m.eeg_suffix = value;
    } else if (key == "gaze_suffix") {
      m.gaze_suffix = value;
    } else if (key == "audio_suffix") {
      m.audio_suffix = value;
    } else if (key == "layout") {
      if (value.find("{modality}") == std::string::npos)
        fail(ErrorCode::parse_error, "manifest: layout must contain {modality}");
      m.layout = value;
    } else {
      fail(ErrorCode::parse_error, "manifest: unknown key '" + std::string(key) + "'");
    }
  }
  for (auto mod : {Modality::eeg, Modality::gaze, Modality::audio})
    if (m.suffix(mod).empty()) fail(ErrorCode::parse_error, "manifest: empty suffix");
  return m;
}

/// Glob match over '/'-separated paths: `*` and `?` stay within one path
/// segment, `**` spans segments.
inline bool glob_match(std::string_view pattern, std::string_view path) {
  if (pattern.empty()) return path.empty();
  if (pattern.substr(0, 2) == "**") {
    auto rest = pattern.substr(2);
    if (!rest.empty() && rest.front() == '/') {
      // "**/" may also match zero segments
      if (glob_match(rest.substr(1), path)) return true;
    }
    for (std::size_t i = 0; i <= path.size(); ++i)
      if (glob_match(rest, path.substr(i))) return true;
    return false;
  }
  if (pattern.front() == '*') {
    for (std::size_t i = 0; i <= path.size(); ++i) {
      if (glob_match(pattern.substr(1), path.substr(i))) return true;
      if (i < path.size() && path[i] == '/') break;
    }
    return false;
  }
  if (path.empty()) return false;
  if (pattern.front() == '?' ? path.front() != '/' : pattern.front() == path.front())
    return glob_match(pattern.substr(1), path.substr(1));
  return false;
}

inline std::string layout_for(const std::string& layout, Modality m) {
  std::string out = layout;
  const std::string token = "{modality}";
  for (auto pos = out.find(token); pos != std::string::npos; pos = out.find(token, pos))
    out.replace(pos, token.size(), layout_word(m));
  return out;
}

/// Files of one trial. Only the EEG file is mandatory.
struct TrialRecordSet {
  TrialKey key;
  std::string eeg_path;
  std::optional<std::string> gaze_path;
  std::optional<std::string> audio_path;

  std::vector<Modality> modalities() const {
    std::vector<Modality> out{Modality::eeg};
    if (gaze_path) out.push_back(Modality::gaze);
    if (audio_path) out.push_back(Modality::audio);
    return out;
  }
};

struct Discovery {
  DatasetManifest manifest;
  std::vector<TrialRecordSet> trials;
  std::vector<std::string> warnings;

  const TrialRecordSet* find(std::string_view basename) const {
    for (const auto& t : trials)
      if (t.key.basename() == basename) return &t;
    return nullptr;
  }
};

/// Groups an already-obtained listing into trials. Deterministic for any
/// permutation of `files`.
inline Discovery group_trials(std::vector<std::string> files, DatasetManifest manifest) {
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  struct Slots {
    TrialKey key;
    std::optional<std::string> path[3];
  };
  std::map<std::string, Slots> by_basename;
  Discovery out;
  out.manifest = manifest;

  // longest suffix first so overlapping suffixes resolve to the most specific
  std::vector<Modality> order{Modality::eeg, Modality::gaze, Modality::audio};
  std::stable_sort(order.begin(), order.end(), [&](Modality a, Modality b) {
    return manifest.suffix(a).size() > manifest.suffix(b).size();
  });

  for (const auto& file : files) {
    if (file == manifest_filename) continue;
    auto name = std::string_view(file).substr(file.find_last_of('/') == std::string::npos ? 0 : file.find_last_of('/') + 1);
    if (name.empty() || name.front() == '.') continue;

    bool in_layout = !manifest.layout;
    std::optional<Modality> modality;
    for (auto m : order) {
      const bool placed = !manifest.layout || glob_match(layout_for(*manifest.layout, m), file);
      in_layout = in_layout || placed;
      const auto& suffix = manifest.suffix(m);
      if (placed && name.size() > suffix.size() && name.substr(name.size() - suffix.size()) == suffix) {
        modality = m;
        break;
      }
    }
    if (!in_layout) continue;
    if (!modality) {
      out.warnings.push_back(file + ": unrecognized file, skipped");
      continue;
    }
    const auto stem = std::string(name.substr(0, name.size() - manifest.suffix(*modality).size()));
    auto key = try_parse_trial_basename(stem);
    if (!key || key->basename() != stem) {
      out.warnings.push_back(file + ": MalformedBasename, skipped");
      continue;
    }
    auto& slot = by_basename.try_emplace(stem, Slots{*key, {}}).first->second;
    auto& target = slot.path[static_cast<int>(*modality)];
    if (target) {
      out.warnings.push_back(file + ": duplicate " + std::string(to_string(*modality)) + " file for " + stem +
                             ", keeping " + *target);
      continue;
    }
    target = file;
  }

  for (auto& [basename, slot] : by_basename) {
    if (!slot.path[0]) {
      out.warnings.push_back(basename + ": no EEG file, trial skipped");
      continue;
    }
    out.trials.push_back({slot.key, *slot.path[0], slot.path[1], slot.path[2]});
  }
  std::sort(out.trials.begin(), out.trials.end(),
            [](const auto& a, const auto& b) { return trial_key_less(a.key, b.key); });
  return out;
}

/// Lists the backend, reads the optional manifest, and groups files by basename.
inline Discovery discover_trials(StorageBackend& backend) {
  auto files = backend.list_files();
  DatasetManifest manifest;
  if (std::find(files.begin(), files.end(), manifest_filename) != files.end())
    manifest = parse_manifest(backend.read(std::string(manifest_filename)));
  return group_trials(std::move(files), std::move(manifest));
}

/// Parsed modalities of one trial.
struct LoadedTrial {
  TrialKey key;
  EegRecord eeg;
  std::optional<GazeRecord> gaze;
  std::optional<AudioRecord> audio;
};

inline LoadedTrial load_trial(StorageBackend& backend, const TrialRecordSet& set, const DatasetManifest& manifest) {
  auto with_context = [&](const std::string& path, auto&& parse) {
    try {
      return parse(backend.read(path));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::rate_limited) throw;
      throw Error(e.code(), path + ": " + e.what());
    }
  };
  LoadedTrial out;
  out.key = set.key;
  out.eeg = with_context(set.eeg_path, [&](const std::string& b) { return load_eeg(b, manifest.timestamp_unit); });
  if (set.gaze_path)
    out.gaze = with_context(*set.gaze_path, [&](const std::string& b) { return load_gaze(b, manifest.timestamp_unit); });
  if (set.audio_path) out.audio = with_context(*set.audio_path, [](const std::string& b) { return load_audio(b); });
  return out;
}

}  // namespace meedav::ingest
