#pragma once

#include <algorithm>
#include <string_view>
#include <vector>

#include "meedav/error.hpp"

namespace meedav::analytics {

enum class ValidityReason { ok, flatline, saturated };

constexpr std::string_view to_string(ValidityReason r) {
  switch (r) {
    case ValidityReason::ok: return "ok";
    case ValidityReason::flatline: return "flatline";
    case ValidityReason::saturated: return "saturated";
  }
  return "ok";
}

struct ChannelStatus {
  bool valid = true;
  double p2p = 0.0;  // microvolts
  ValidityReason reason = ValidityReason::ok;
};

struct ValidityThresholds {
  double flatline_uv = 1.0;
  double saturation_uv = 1800.0;
};

/// Peak-to-peak heuristic: below the flatline threshold or above the
/// saturation threshold marks a channel invalid.
inline std::vector<ChannelStatus> channel_validity(const std::vector<std::vector<double>>& eeg,
                                                   const ValidityThresholds& th = {}) {
  std::vector<ChannelStatus> out;
  out.reserve(eeg.size());
  for (const auto& ch : eeg) {
    if (ch.size() < 2) fail(ErrorCode::insufficient_data, "validity needs at least 2 samples");
    auto [lo, hi] = std::minmax_element(ch.begin(), ch.end());
    ChannelStatus st;
    st.p2p = *hi - *lo;
    st.reason = st.p2p < th.flatline_uv    ? ValidityReason::flatline
                : st.p2p > th.saturation_uv ? ValidityReason::saturated
                                            : ValidityReason::ok;
    st.valid = st.reason == ValidityReason::ok;
    out.push_back(st);
  }
  return out;
}

inline std::vector<bool> validity_flags(const std::vector<ChannelStatus>& statuses) {
  std::vector<bool> out;
  for (const auto& s : statuses) out.push_back(s.valid);
  return out;
}

}  // namespace meedav::analytics
