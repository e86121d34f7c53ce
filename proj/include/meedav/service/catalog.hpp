#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "meedav/format.hpp"
#include "meedav/pipeline.hpp"

namespace meedav::service {

/// Memoizes discovery, aligned trials and denoise results over one backend.
/// Readers share the lock; values are computed outside it and inserted under
/// an exclusive lock, so a slow ICA never blocks requests for other trials.
/// Two threads racing on the same key both compute; the first insert wins and
/// the results are identical anyway.
class TrialCatalog {
 public:
  explicit TrialCatalog(std::shared_ptr<ingest::StorageBackend> backend, PipelineOptions opts = {})
      : backend_(std::move(backend)), opts_(opts) {}

  const ingest::StorageBackend& backend() const { return *backend_; }

  std::shared_ptr<const ingest::Discovery> discovery() {
    {
      std::shared_lock lock(mutex_);
      if (discovery_) return discovery_;
    }
    auto found = std::make_shared<const ingest::Discovery>(ingest::discover_trials(*backend_));
    std::unique_lock lock(mutex_);
    if (!discovery_) discovery_ = std::move(found);
    return discovery_;
  }

  std::shared_ptr<const PreparedTrial> trial(std::string_view basename) {
    const std::string key(basename);
    {
      std::shared_lock lock(mutex_);
      if (auto it = trials_.find(key); it != trials_.end()) return it->second;
    }
    auto d = discovery();
    auto prepared = std::make_shared<const PreparedTrial>(prepare_trial(*backend_, *d, basename, opts_));
    std::unique_lock lock(mutex_);
    return trials_.try_emplace(key, std::move(prepared)).first->second;
  }

  std::shared_ptr<const denoise::TrialDenoise> denoised(std::string_view basename, const DenoiseParams& params = {}) {
    const auto key = std::string(basename) + "|" + params_key(params);
    {
      std::shared_lock lock(mutex_);
      if (auto it = denoised_.find(key); it != denoised_.end()) return it->second;
    }
    auto t = trial(basename);
    auto result = std::make_shared<const denoise::TrialDenoise>(denoise_prepared(*t, params));
    std::unique_lock lock(mutex_);
    return denoised_.try_emplace(key, std::move(result)).first->second;
  }

  std::size_t cached_trials() const {
    std::shared_lock lock(mutex_);
    return trials_.size();
  }

 private:
  static std::string params_key(const DenoiseParams& p) {
    return format_double(p.criteria.kurtosis_sigma_factor) + "," + format_double(p.criteria.p2p_percentile) + "," +
           std::to_string(p.ica.max_iter) + "," + format_double(p.ica.tol) + "," + std::to_string(p.ica.seed);
  }

  std::shared_ptr<ingest::StorageBackend> backend_;
  PipelineOptions opts_;
  mutable std::shared_mutex mutex_;
  std::shared_ptr<const ingest::Discovery> discovery_;
  std::map<std::string, std::shared_ptr<const PreparedTrial>, std::less<>> trials_;
  std::map<std::string, std::shared_ptr<const denoise::TrialDenoise>, std::less<>> denoised_;
};

}  // namespace meedav::service
