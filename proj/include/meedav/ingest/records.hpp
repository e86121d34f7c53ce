#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "meedav/error.hpp"
#include "meedav/ingest/delimited.hpp"

namespace meedav::ingest {

enum class TimeUnit { seconds, milliseconds };

constexpr double seconds_per(TimeUnit unit) { return unit == TimeUnit::seconds ? 1.0 : 1e-3; }

struct EegChannel {
  std::string name;
  std::vector<double> samples;  // microvolts
};

/// Raw EEG stream with native timestamps. Every channel has one sample per timestamp.
struct EegRecord {
  std::vector<double> timestamps;
  std::vector<EegChannel> channels;
  TimeUnit native_unit = TimeUnit::milliseconds;

  std::size_t size() const { return timestamps.size(); }
};

enum class EventKind { fixation, saccade, blink, other };

constexpr std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::fixation: return "fixation";
    case EventKind::saccade: return "saccade";
    case EventKind::blink: return "blink";
    case EventKind::other: return "other";
  }
  return "other";
}

struct GazeEvent {
  EventKind kind = EventKind::other;
  std::string label;  // original text, kept for `other`

  friend bool operator==(const GazeEvent&, const GazeEvent&) = default;
};

/// EyeLink-style sample stream: one (x, y, optional event) per timestamp.
struct GazeRecord {
  std::vector<double> timestamps;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::optional<GazeEvent>> events;
  TimeUnit native_unit = TimeUnit::milliseconds;

  std::size_t size() const { return timestamps.size(); }
};

/// Case-insensitive mapping of an eye-tracker event label; empty means no event.
inline std::optional<GazeEvent> normalize_event(std::string_view label) {
  if (label.empty()) return std::nullopt;
  std::string lower(label);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fixation") return GazeEvent{EventKind::fixation, "fixation"};
  if (lower == "saccade") return GazeEvent{EventKind::saccade, "saccade"};
  if (lower == "blink") return GazeEvent{EventKind::blink, "blink"};
  return GazeEvent{EventKind::other, std::string(label)};
}

namespace detail {

inline int require_column(const DelimitedTable& table, std::string_view name) {
  int col = table.column(name);
  if (col < 0) fail(ErrorCode::parse_error, "missing '" + std::string(name) + "' column");
  return col;
}

inline std::string cell_name(std::size_t row, const std::string& column) {
  // header is line 1, so data row r sits on line r + 2
  return "row " + std::to_string(row + 2) + ", column " + column;
}

inline std::vector<double> numeric_column(const DelimitedTable& table, int col) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    out.push_back(parse_number(table.rows[r][col], cell_name(r, table.header[col])));
  return out;
}

inline void require_non_decreasing(const std::vector<double>& ts) {
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (ts[i] < ts[i - 1])
      fail(ErrorCode::parse_error, "row " + std::to_string(i + 2) + ": timestamp decreases");
}

}  // namespace detail

/// Parses EEG text. The timestamp column is `TimeStamp`; every column whose
/// header starts with `RAW_` becomes a channel, in file order.
inline EegRecord load_eeg(std::string_view bytes, TimeUnit unit = TimeUnit::milliseconds) {
  const auto table = parse_delimited(bytes);
  const int ts_col = detail::require_column(table, "TimeStamp");

  EegRecord rec;
  rec.native_unit = unit;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (name.rfind("RAW_", 0) != 0) continue;
    if (!seen.insert(name).second) fail(ErrorCode::parse_error, "duplicate channel '" + name + "'");
    rec.channels.push_back({name, {}});
  }
  if (rec.channels.empty()) fail(ErrorCode::parse_error, "no RAW_ channel columns");
  if (table.rows.empty()) fail(ErrorCode::empty_record, "EEG file has no data rows");

  rec.timestamps = detail::numeric_column(table, ts_col);
  detail::require_non_decreasing(rec.timestamps);
  for (auto& ch : rec.channels) ch.samples = detail::numeric_column(table, table.column(ch.name));
  return rec;
}

/// Parses gaze text with `TimeStamp`, `X`, `Y` and an optional `Event` column.
inline GazeRecord load_gaze(std::string_view bytes, TimeUnit unit = TimeUnit::milliseconds) {
  const auto table = parse_delimited(bytes);
  const int ts_col = detail::require_column(table, "TimeStamp");
  const int x_col = detail::require_column(table, "X");
  const int y_col = detail::require_column(table, "Y");
  const int ev_col = table.column("Event");
  if (table.rows.empty()) fail(ErrorCode::empty_record, "gaze file has no data rows");

  GazeRecord rec;
  rec.native_unit = unit;
  rec.timestamps = detail::numeric_column(table, ts_col);
  detail::require_non_decreasing(rec.timestamps);
  rec.x = detail::numeric_column(table, x_col);
  rec.y = detail::numeric_column(table, y_col);
  rec.events.reserve(table.rows.size());
  for (const auto& row : table.rows)
    rec.events.push_back(ev_col < 0 ? std::nullopt : normalize_event(row[ev_col]));
  return rec;
}

}  // namespace meedav::ingest
