#pragma once

#include <charconv>
#include <string>

namespace meedav {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace meedav
