#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "meedav/error.hpp"

namespace meedav::ingest {

/// A delimiter-separated table: one header row plus rectangular data rows.
struct DelimitedTable {
  char delimiter = ',';
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Case-insensitive header lookup; -1 when absent.
  int column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i].size() != name.size()) continue;
      bool same = true;
      for (std::size_t j = 0; j < name.size() && same; ++j)
        same = std::tolower(static_cast<unsigned char>(header[i][j])) ==
               std::tolower(static_cast<unsigned char>(name[j]));
      if (same) return static_cast<int>(i);
    }
    return -1;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string> split_cells(std::string_view line, char delimiter) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delimiter, start);
    auto cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    cells.emplace_back(trim(cell));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

// comma vs tab: whichever occurs more often in the header; ties go to comma
inline char detect_delimiter(std::string_view header_line) {
  std::size_t commas = 0, tabs = 0;
  for (char c : header_line) {
    commas += c == ',';
    tabs += c == '\t';
  }
  return tabs > commas ? '\t' : ',';
}

}  // namespace detail

inline DelimitedTable parse_delimited(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  DelimitedTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!have_header) {
      table.delimiter = detail::detect_delimiter(line);
      table.header = detail::split_cells(line, table.delimiter);
      have_header = true;
    } else {
      auto cells = detail::split_cells(line, table.delimiter);
      if (cells.size() != table.header.size()) {
        fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(table.header.size()) + " fields, found " +
                                         std::to_string(cells.size()));
      }
      table.rows.push_back(std::move(cells));
    }
    if (end == text.size()) break;
  }
  if (!have_header) fail(ErrorCode::parse_error, "missing header row");
  return table;
}

/// Parses a finite decimal number; `where` names the cell for the diagnostic.
inline double parse_number(std::string_view cell, const std::string& where) {
  double value = 0.0;
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    fail(ErrorCode::parse_error, where + ": '" + std::string(cell) + "' is not a finite number");
  }
  return value;
}

}  // namespace meedav::ingest
