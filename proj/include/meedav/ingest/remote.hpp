#pragma once

#include <atomic>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <httplib.h>
// <resolv.h>, pulled in by httplib, defines `_res`, which clashes with Eigen internals
#ifdef _res
#undef _res
#endif
#include <json.hpp>

#include "meedav/error.hpp"
#include "meedav/ingest/storage.hpp"

namespace meedav::ingest {

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;  // lower-case names

  std::optional<std::string> header(const std::string& name) const {
    auto it = headers.find(name);
    if (it == headers.end()) return std::nullopt;
    return it->second;
  }
};

/// Minimal GET-only HTTP client seam, so the remote backend can be exercised
/// against recorded responses.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Throws NetworkError when no response could be obtained.
  virtual HttpResponse get(const std::string& base_url, const std::string& target,
                           const std::map<std::string, std::string>& headers) = 0;
};

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse get(const std::string& base_url, const std::string& target,
                   const std::map<std::string, std::string>& headers) override {
    httplib::Client client(base_url);
    client.set_follow_location(true);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    httplib::Headers hs;
    for (const auto& [k, v] : headers) hs.emplace(k, v);
    auto res = client.Get(target, hs);
    if (!res) fail(ErrorCode::network_error, "GET " + base_url + target + ": " + httplib::to_string(res.error()));
    HttpResponse out;
    out.status = res->status;
    out.body = std::move(res->body);
    for (const auto& [k, v] : res->headers) {
      std::string lower = k;
      for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.headers[lower] = v;
    }
    return out;
  }
};

/// `owner/repo[@ref]`; ref defaults to `main`.
struct RemoteRepo {
  std::string owner;
  std::string repo;
  std::string ref = "main";

  static RemoteRepo parse(std::string_view spec) {
    RemoteRepo r;
    auto at = spec.find('@');
    if (at != std::string_view::npos) {
      r.ref = std::string(spec.substr(at + 1));
      spec = spec.substr(0, at);
    }
    auto slash = spec.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 == spec.size() ||
        spec.find('/', slash + 1) != std::string_view::npos || r.ref.empty())
      fail(ErrorCode::bad_parameter, "remote repository must be owner/repo[@ref], got '" + std::string(spec) + "'");
    r.owner = std::string(spec.substr(0, slash));
    r.repo = std::string(spec.substr(slash + 1));
    return r;
  }

  std::string describe() const { return owner + "/" + repo + "@" + ref; }
};

struct RemoteEndpoints {
  std::string api_base = "https://api.github.com";
  std::string raw_base = "https://raw.githubusercontent.com";

  /// Defaults, overridable via MEEDAV_GITHUB_API_URL / MEEDAV_GITHUB_RAW_URL.
  static RemoteEndpoints from_env() {
    RemoteEndpoints e;
    if (const char* api = std::getenv("MEEDAV_GITHUB_API_URL"); api && *api) e.api_base = api;
    if (const char* raw = std::getenv("MEEDAV_GITHUB_RAW_URL"); raw && *raw) e.raw_base = raw;
    return e;
  }
};

inline std::string percent_encode_path(std::string_view path) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : path) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '/') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

/// Dataset served from a GitHub-style repository: one recursive tree listing,
/// then raw-content fetches per blob. Listing and blobs are cached in memory
/// for the lifetime of the backend.
class RemoteBackend final : public StorageBackend {
 public:
  RemoteBackend(RemoteRepo repo, std::shared_ptr<HttpTransport> transport,
                RemoteEndpoints endpoints = RemoteEndpoints::from_env(),
                std::optional<std::string> token = token_from_env())
      : repo_(std::move(repo)),
        transport_(std::move(transport)),
        endpoints_(std::move(endpoints)),
        token_(std::move(token)) {}

  static std::optional<std::string> token_from_env() {
    if (const char* t = std::getenv("MEEDAV_GITHUB_TOKEN"); t && *t) return std::string(t);
    return std::nullopt;
  }

  /// Blob paths from the recursive tree listing.
  std::vector<std::string> list_remote_tree() {
    {
      std::shared_lock lock(mutex_);
      if (tree_) return keys(*tree_);
    }
    const auto target = "/repos/" + repo_.owner + "/" + repo_.repo + "/git/trees/" + repo_.ref + "?recursive=1";
    auto res = request(endpoints_.api_base, target, true);
    std::map<std::string, std::size_t> tree;
    try {
      auto doc = nlohmann::json::parse(res.body);
      for (const auto& entry : doc.at("tree")) {
        if (entry.value("type", "") != "blob") continue;
        tree[entry.at("path").get<std::string>()] = entry.value("size", std::size_t{0});
      }
      truncated_ = doc.value("truncated", false);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::network_error, "malformed tree listing for " + repo_.describe() + ": " + e.what());
    }
    std::unique_lock lock(mutex_);
    if (!tree_) tree_ = std::move(tree);
    return keys(*tree_);
  }

  /// Exact bytes of one blob listed in the tree.
  std::string fetch_blob(const std::string& path) {
    const auto size = blob_size(path);
    {
      std::shared_lock lock(mutex_);
      if (auto it = blobs_.find(path); it != blobs_.end()) return it->second;
    }
    const auto target = "/" + repo_.owner + "/" + repo_.repo + "/" + repo_.ref + "/" + percent_encode_path(path);
    auto res = request(endpoints_.raw_base, target, false);
    if (res.body.size() != size)
      fail(ErrorCode::network_error, path + ": received " + std::to_string(res.body.size()) +
                                         " bytes, tree lists " + std::to_string(size));
    std::unique_lock lock(mutex_);
    return blobs_.try_emplace(path, std::move(res.body)).first->second;
  }

  std::size_t blob_size(const std::string& path) {
    list_remote_tree();
    std::shared_lock lock(mutex_);
    auto it = tree_->find(path);
    if (it == tree_->end()) fail(ErrorCode::not_found, path + " is not in " + repo_.describe());
    return it->second;
  }

  std::vector<std::string> list_files() override {
    try {
      return list_remote_tree();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::network_error) fail(ErrorCode::backend_unavailable, e.what());
      throw;
    }
  }

  std::string read(const std::string& path) override { return fetch_blob(path); }

  std::string describe() const override { return "github:" + repo_.describe(); }

  std::size_t request_count() const { return requests_.load(); }
  bool truncated() const { return truncated_; }

 private:
  static std::vector<std::string> keys(const std::map<std::string, std::size_t>& m) {
    std::vector<std::string> out;
    out.reserve(m.size());
    for (const auto& [k, _] : m) out.push_back(k);
    return out;
  }

  HttpResponse request(const std::string& base, const std::string& target, bool api) {
    std::map<std::string, std::string> headers{{"User-Agent", "meedav"}};
    if (api) {
      headers["Accept"] = "application/vnd.github+json";
      headers["X-GitHub-Api-Version"] = "2022-11-28";
    }
    if (token_) headers["Authorization"] = "Bearer " + *token_;
    ++requests_;
    auto res = transport_->get(base, target, headers);
    if (res.status == 200) return res;
    if ((res.status == 403 || res.status == 429) && res.header("x-ratelimit-remaining") == "0") {
      long long reset = 0;
      if (auto r = res.header("x-ratelimit-reset")) reset = std::atoll(r->c_str());
      throw RateLimitedError(reset, "rate limited by " + base + "; quota resets at epoch " + std::to_string(reset));
    }
    if (res.status == 404) fail(ErrorCode::not_found, base + target + " not found");
    fail(ErrorCode::network_error, "GET " + base + target + " returned HTTP " + std::to_string(res.status));
  }

  RemoteRepo repo_;
  std::shared_ptr<HttpTransport> transport_;
  RemoteEndpoints endpoints_;
  std::optional<std::string> token_;

  mutable std::shared_mutex mutex_;
  std::optional<std::map<std::string, std::size_t>> tree_;
  std::map<std::string, std::string> blobs_;
  std::atomic<std::size_t> requests_{0};
  bool truncated_ = false;
};

}  // namespace meedav::ingest
