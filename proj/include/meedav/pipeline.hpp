#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "meedav/align/trial.hpp"
#include "meedav/analytics/validity.hpp"
#include "meedav/denoise/trial_denoise.hpp"
#include "meedav/error.hpp"
#include "meedav/ingest/dataset.hpp"

namespace meedav {

/// An aligned trial with channel validity filled in, ready for analytics.
struct PreparedTrial {
  align::AlignedTrial trial;
  std::vector<analytics::ChannelStatus> channel_status;
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  align::AlignOptions align;
  analytics::ValidityThresholds validity;
};

struct DenoiseParams {
  denoise::ArtifactCriteria criteria;
  denoise::IcaOptions ica;
};

inline PreparedTrial prepare_trial(ingest::StorageBackend& backend, const ingest::Discovery& discovery,
                                   std::string_view basename, const PipelineOptions& opts = {}) {
  const auto* set = discovery.find(basename);
  if (!set) fail(ErrorCode::unknown_trial, "no trial named '" + std::string(basename) + "'");
  auto aligned = align::align_trial(ingest::load_trial(backend, *set, discovery.manifest), opts.align);
  PreparedTrial out{std::move(aligned.trial), {}, std::move(aligned.warnings)};
  out.channel_status = analytics::channel_validity(out.trial.eeg, opts.validity);
  out.trial.validity = analytics::validity_flags(out.channel_status);
  return out;
}

inline denoise::TrialDenoise denoise_prepared(const PreparedTrial& p, const DenoiseParams& params = {}) {
  return denoise::denoise_trial(p.trial, p.trial.validity, params.criteria, params.ica);
}

}  // namespace meedav
