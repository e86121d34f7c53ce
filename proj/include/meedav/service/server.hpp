#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include <httplib.h>
// <resolv.h>, pulled in by httplib, defines `_res`, which clashes with Eigen internals
#ifdef _res
#undef _res
#endif

#include "meedav/service/api.hpp"

namespace meedav::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8000;
  std::optional<std::filesystem::path> ui_dir;  // static files served at /
};

/// MEEDAV_PORT when set and valid, otherwise `fallback`.
inline int port_from_env(int fallback = 8000) {
  if (const char* v = std::getenv("MEEDAV_PORT"); v && *v) {
    char* end = nullptr;
    const long p = std::strtol(v, &end, 10);
    if (*end == '\0' && p > 0 && p < 65536) return static_cast<int>(p);
  }
  return fallback;
}

/// Routes every GET under /api to `api`, answers CORS preflights, and
/// optionally serves a static UI build.
inline void mount(httplib::Server& server, Api& api, const ServerOptions& opts = {}) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Get(R"(/api/.*)", [&api](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [k, v] : req.params) query.try_emplace(k, v);
    const auto r = api.get(req.path, query);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
  if (opts.ui_dir && !server.set_mount_point("/", opts.ui_dir->string()))
    fail(ErrorCode::io_error, "cannot serve UI from " + opts.ui_dir->string());
}

}  // namespace meedav::service
