#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "meedav/error.hpp"

namespace meedav::ingest {

/// Identity of one trial recording: `<participant>_<stimulus>_<order>_<task>`,
/// e.g. `P03_S084_01_Read`.
struct TrialKey {
  std::string participant;
  std::string stimulus;
  std::string order;
  std::string task;

  std::string basename() const {
    return participant + '_' + stimulus + '_' + order + '_' + task;
  }

  friend bool operator==(const TrialKey&, const TrialKey&) = default;
};

namespace detail {

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

inline bool prefixed_number(std::string_view s, char prefix) {
  return s.size() >= 2 && s.front() == prefix && all_digits(s.substr(1));
}

inline bool is_task(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '-'; });
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// numeric value of the digits from `offset` on; used for natural ordering
inline unsigned long long digits_value(const std::string& s, std::size_t offset) {
  unsigned long long v = 0;
  for (std::size_t i = offset; i < s.size(); ++i) v = v * 10 + static_cast<unsigned>(s[i] - '0');
  return v;
}

}  // namespace detail

/// Strips the directory part and the first '.'-delimited suffix.
inline std::string file_stem(std::string_view filename) {
  auto slash = filename.find_last_of('/');
  if (slash != std::string_view::npos) filename.remove_prefix(slash + 1);
  auto dot = filename.find('.');
  return std::string(filename.substr(0, dot));
}

/// Parses a basename (the stem of the file name) into its four components.
/// Throws MalformedBasename when the stem is not `P<digits>_S<digits>_<digits>_<Task>`.
inline TrialKey parse_trial_basename(std::string_view filename) {
  if (filename.empty()) fail(ErrorCode::malformed_basename, "empty file name");
  const std::string stem = file_stem(filename);
  const auto parts = detail::split(stem, '_');
  if (parts.size() != 4 || !detail::prefixed_number(parts[0], 'P') ||
      !detail::prefixed_number(parts[1], 'S') || !detail::all_digits(parts[2]) ||
      !detail::is_task(parts[3])) {
    fail(ErrorCode::malformed_basename,
         "'" + std::string(filename) + "' is not of the form P##_S###_##_Task");
  }
  return TrialKey{std::string(parts[0]), std::string(parts[1]), std::string(parts[2]),
                  std::string(parts[3])};
}

inline std::optional<TrialKey> try_parse_trial_basename(std::string_view filename) {
  try {
    return parse_trial_basename(filename);
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Orders by (participant, stimulus, order) numerically, then task.
inline bool trial_key_less(const TrialKey& a, const TrialKey& b) {
  auto rank = [](const TrialKey& k) {
    return std::make_tuple(detail::digits_value(k.participant, 1), k.participant,
                           detail::digits_value(k.stimulus, 1), k.stimulus,
                           detail::digits_value(k.order, 0), k.order, k.task);
  };
  return rank(a) < rank(b);
}

}  // namespace meedav::ingest
