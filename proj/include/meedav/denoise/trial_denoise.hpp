#pragma once

#include <optional>
#include <vector>

#include "meedav/align/trial.hpp"
#include "meedav/denoise/ica.hpp"

namespace meedav::denoise {

/// Denoising of one aligned trial. Channels flagged invalid are left out of
/// the decomposition and passed through unchanged.
struct TrialDenoise {
  std::vector<std::size_t> channels;  // trial channel indices that entered ICA
  std::optional<DenoiseResult> result;
  std::vector<std::vector<double>> cleaned;  // every channel, trial order
};

inline TrialDenoise denoise_trial(const align::AlignedTrial& trial, const std::vector<bool>& valid,
                                  const ArtifactCriteria& criteria = {}, const IcaOptions& opts = {}) {
  TrialDenoise out;
  out.cleaned = trial.eeg;
  for (std::size_t c = 0; c < trial.eeg.size(); ++c)
    if (valid.empty() || valid[c]) out.channels.push_back(c);
  if (out.channels.empty()) return out;

  const auto t = static_cast<Eigen::Index>(trial.length());
  Matrix x(static_cast<Eigen::Index>(out.channels.size()), t);
  for (std::size_t r = 0; r < out.channels.size(); ++r)
    for (Eigen::Index j = 0; j < t; ++j) x(static_cast<Eigen::Index>(r), j) = trial.eeg[out.channels[r]][static_cast<std::size_t>(j)];

  out.result = denoise_eeg(x, criteria, opts);
  for (std::size_t r = 0; r < out.channels.size(); ++r)
    for (Eigen::Index j = 0; j < t; ++j)
      out.cleaned[out.channels[r]][static_cast<std::size_t>(j)] = out.result->cleaned(static_cast<Eigen::Index>(r), j);
  return out;
}

}  // namespace meedav::denoise
