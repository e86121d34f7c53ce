#pragma once

#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>

#include "meedav/error.hpp"
#include "meedav/ingest/remote.hpp"
#include "meedav/ingest/storage.hpp"

namespace meedav::ingest {

/// Builds a backend from `local:<dir>` or `github:<owner>/<repo>[@ref]`.
inline std::unique_ptr<StorageBackend> make_backend(std::string_view spec,
                                                    std::shared_ptr<HttpTransport> transport = nullptr) {
  if (spec.rfind("local:", 0) == 0) return std::make_unique<LocalBackend>(std::string(spec.substr(6)));
  if (spec.rfind("github:", 0) == 0) {
    if (!transport) transport = std::make_shared<HttplibTransport>();
    return std::make_unique<RemoteBackend>(RemoteRepo::parse(spec.substr(7)), std::move(transport));
  }
  fail(ErrorCode::bad_parameter, "backend must be local:<dir> or github:<owner>/<repo>[@ref], got '" +
                                     std::string(spec) + "'");
}

/// Backend named by MEEDAV_BACKEND, or `fallback` when unset.
inline std::string backend_spec_from_env(std::string fallback = "local:.") {
  if (const char* v = std::getenv("MEEDAV_BACKEND"); v && *v) return v;
  return fallback;
}

}  // namespace meedav::ingest
