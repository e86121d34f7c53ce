#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "meedav/format.hpp"
#include "meedav/pipeline.hpp"
#include "meedav/serialize.hpp"

namespace meedav::exporter {

enum class ExportFormat { csv, json };

inline ExportFormat parse_format(std::string_view s) {
  if (s == "csv") return ExportFormat::csv;
  if (s == "json") return ExportFormat::json;
  fail(ErrorCode::bad_parameter, "unknown export format '" + std::string(s) + "'");
}

struct ExportedFile {
  std::string name;
  std::string bytes;
};

namespace detail {

// grid sample i at 256 Hz is exactly i * 3.90625 ms
inline double grid_ms(const align::UniformAxis& g, std::size_t i) { return g.at(i) * 1000.0; }

/// Grid row of each gaze event onset (nearest sample); the first onset wins a row.
inline std::vector<const align::EventMarker*> events_by_row(const align::AlignedTrial& t) {
  std::vector<const align::EventMarker*> rows(t.length(), nullptr);
  for (const auto& e : t.gaze_events) {
    auto r = static_cast<std::size_t>(std::max(0L, std::lround((e.time_s - t.grid.start) / t.grid.step)));
    r = std::min(r, t.length() - 1);
    if (!rows[r]) rows[r] = &e;
  }
  return rows;
}

inline serialize::Json timestamps_json(const align::UniformAxis& g) {
  serialize::Json ts = serialize::Json::array();
  for (std::size_t i = 0; i < g.length; ++i) ts.push_back(grid_ms(g, i));
  return ts;
}

}  // namespace detail

/// EEG on the grid in the ingest layout: TimeStamp (ms) then one RAW_* column per channel.
inline std::string eeg_csv(const align::AlignedTrial& t, const std::vector<std::vector<double>>& eeg) {
  std::string out = "TimeStamp";
  for (const auto& name : t.channel_names) out += "," + name;
  out += "\n";
  for (std::size_t i = 0; i < t.length(); ++i) {
    out += format_double(detail::grid_ms(t.grid, i));
    for (const auto& ch : eeg) out += "," + format_double(ch[i]);
    out += "\n";
  }
  return out;
}

/// Gaze on the grid in the ingest layout; event labels mark onset rows only.
inline std::string gaze_csv(const align::AlignedTrial& t) {
  if (!t.has_gaze()) fail(ErrorCode::missing_modality, t.key.basename() + " has no gaze");
  const auto rows = detail::events_by_row(t);
  std::string out = "TimeStamp,X,Y,Event\n";
  for (std::size_t i = 0; i < t.length(); ++i) {
    out += format_double(detail::grid_ms(t.grid, i)) + "," + format_double((*t.gaze_x)[i]) + "," +
           format_double((*t.gaze_y)[i]) + "," + (rows[i] ? rows[i]->event.label : std::string()) + "\n";
  }
  return out;
}

inline std::string envelope_csv(const align::AlignedTrial& t) {
  if (!t.audio_envelope) fail(ErrorCode::missing_modality, t.key.basename() + " has no audio");
  std::string out = "TimeStamp,Envelope\n";
  for (std::size_t i = 0; i < t.length(); ++i)
    out += format_double(detail::grid_ms(t.grid, i)) + "," + format_double((*t.audio_envelope)[i]) + "\n";
  return out;
}

inline std::string eeg_json(const align::AlignedTrial& t, const std::vector<std::vector<double>>& eeg) {
  serialize::Json channels = serialize::Json::object();
  for (std::size_t c = 0; c < eeg.size(); ++c) channels[t.channel_names[c]] = eeg[c];
  return serialize::Json{{"timestamps_ms", detail::timestamps_json(t.grid)}, {"channels", std::move(channels)}}.dump() + "\n";
}

inline std::string gaze_json(const align::AlignedTrial& t) {
  if (!t.has_gaze()) fail(ErrorCode::missing_modality, t.key.basename() + " has no gaze");
  serialize::Json events = serialize::Json::array();
  for (const auto& e : t.gaze_events) events.push_back(serialize::event_json(e));
  return serialize::Json{{"timestamps_ms", detail::timestamps_json(t.grid)}, {"x", *t.gaze_x}, {"y", *t.gaze_y},
                         {"events", std::move(events)}}
             .dump() +
         "\n";
}

inline std::string envelope_json(const align::AlignedTrial& t) {
  if (!t.audio_envelope) fail(ErrorCode::missing_modality, t.key.basename() + " has no audio");
  return serialize::Json{{"timestamps_ms", detail::timestamps_json(t.grid)}, {"envelope", *t.audio_envelope}}.dump() + "\n";
}

/// Every file for one trial: eeg, gaze and envelope when present, metadata,
/// and cleaned EEG when a denoise is supplied. Pure: bytes only, no I/O.
inline std::vector<ExportedFile> export_trial(const PreparedTrial& p, const denoise::TrialDenoise* cleaned,
                                              ExportFormat format = ExportFormat::csv) {
  const auto& t = p.trial;
  const auto base = t.key.basename();
  const bool csv = format == ExportFormat::csv;
  std::vector<ExportedFile> files;
  files.push_back({base + (csv ? ".eeg" : ".eeg.json"), csv ? eeg_csv(t, t.eeg) : eeg_json(t, t.eeg)});
  if (t.has_gaze()) files.push_back({base + (csv ? ".et" : ".gaze.json"), csv ? gaze_csv(t) : gaze_json(t)});
  if (t.audio_envelope)
    files.push_back({base + (csv ? ".envelope.csv" : ".envelope.json"), csv ? envelope_csv(t) : envelope_json(t)});
  if (cleaned)
    files.push_back({base + (csv ? ".clean.csv" : ".clean.json"),
                     csv ? eeg_csv(t, cleaned->cleaned) : eeg_json(t, cleaned->cleaned)});
  files.push_back({base + ".meta.json", serialize::metadata_json(p, cleaned).dump(2) + "\n"});
  return files;
}

inline void write_files(const std::vector<ExportedFile>& files, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& f : files) {
    std::ofstream out(dir / f.name, std::ios::binary | std::ios::trunc);
    out.write(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
    out.close();
    if (!out) fail(ErrorCode::io_error, "cannot write " + (dir / f.name).string());
  }
}

}  // namespace meedav::exporter
