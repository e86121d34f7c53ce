#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "meedav/analytics/correlation.hpp"
#include "meedav/analytics/intensity.hpp"
#include "meedav/analytics/kde.hpp"
#include "meedav/serialize.hpp"
#include "meedav/service/catalog.hpp"

namespace meedav::service {

using serialize::Json;
using Query = std::map<std::string, std::string, std::less<>>;

struct ApiResponse {
  int status = 200;
  std::string body;
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_trial:
    case ErrorCode::not_found: return 404;
    case ErrorCode::missing_modality:
    case ErrorCode::no_such_events: return 409;
    case ErrorCode::bad_parameter:
    case ErrorCode::window_too_small: return 422;
    case ErrorCode::backend_unavailable:
    case ErrorCode::network_error:
    case ErrorCode::rate_limited: return 502;
    default: return 500;
  }
}

inline ApiResponse error_response(int status, std::string_view code, std::string_view detail) {
  return {status, Json{{"error", code}, {"detail", detail}}.dump()};
}

inline ApiResponse error_response(const Error& e) { return error_response(http_status(e.code()), to_string(e.code()), e.what()); }

namespace detail {

inline std::optional<std::string_view> param(const Query& q, std::string_view name) {
  if (auto it = q.find(name); it != q.end()) return std::string_view(it->second);
  return std::nullopt;
}

inline bool bool_param(const Query& q, std::string_view name, bool fallback) {
  auto v = param(q, name);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  fail(ErrorCode::bad_parameter, std::string(name) + " must be true or false");
}

inline double positive_param(const Query& q, std::string_view name, double fallback) {
  auto v = param(q, name);
  if (!v) return fallback;
  double out = 0.0;
  auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || end != v->data() + v->size() || !std::isfinite(out) || !(out > 0.0))
    fail(ErrorCode::bad_parameter, std::string(name) + " must be a positive number");
  return out;
}

inline std::size_t count_param(const Query& q, std::string_view name, std::size_t fallback) {
  auto v = param(q, name);
  if (!v) return fallback;
  std::size_t out = 0;
  auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || end != v->data() + v->size() || out < 1)
    fail(ErrorCode::bad_parameter, std::string(name) + " must be an integer >= 1");
  return out;
}

inline std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

inline Json decimate(const std::vector<double>& v, std::size_t k) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); i += k) out.push_back(v[i]);
  return out;
}

inline ingest::EventKind parse_event_kind(std::string_view s) {
  if (s == "fixation") return ingest::EventKind::fixation;
  if (s == "saccade") return ingest::EventKind::saccade;
  if (s == "blink") return ingest::EventKind::blink;
  fail(ErrorCode::bad_parameter, "event must be fixation, saccade or blink");
}

}  // namespace detail

/// The HTTP API as pure functions of (path, query) over a trial catalog;
/// the transport layer only forwards requests here.
class Api {
 public:
  explicit Api(TrialCatalog& catalog, DenoiseParams denoise = {}) : catalog_(catalog), denoise_(denoise) {}

  ApiResponse get(std::string_view path, const Query& query = {}) {
    try {
      const auto parts = detail::split_path(path);
      if (parts.size() >= 2 && parts[0] == "api") {
        if (parts[1] == "trials") {
          if (parts.size() == 2) return ok(trials(query));
          if (parts.size() == 3) return ok(trial(parts[2]));
          if (parts.size() == 4 && parts[3] == "timeline") return ok(timeline(parts[2], query));
          if (parts.size() == 4 && parts[3] == "heatmap") return ok(heatmap(parts[2], query));
          if (parts.size() == 4 && parts[3] == "correlation") return ok(correlation(parts[2], query));
        }
        if (parts[1] == "participants" && parts.size() == 4 && parts[3] == "dashboard")
          return ok(dashboard(parts[2], query));
        if (parts[1] == "health" && parts.size() == 2) return ok(Json{{"status", "ok"}});
      }
      return error_response(404, "NotFound", "no route for " + std::string(path));
    } catch (const Error& e) {
      return error_response(e);
    } catch (const std::exception& e) {
      return error_response(500, "Internal", e.what());
    }
  }

  /// GET /api/trials?participant=&stimulus=
  Json trials(const Query& q) {
    const auto participant = detail::param(q, "participant");
    const auto stimulus = detail::param(q, "stimulus");
    const auto found = catalog_.discovery();
    Json out = Json::array();
    for (const auto& set : found->trials) {
      if (participant && set.key.participant != *participant) continue;
      if (stimulus && set.key.stimulus != *stimulus) continue;
      Json j = serialize::key_json(set.key);
      Json modalities = Json::array();
      for (auto m : set.modalities()) modalities.push_back(ingest::to_string(m));
      j["modalities"] = std::move(modalities);
      try {
        j["duration_s"] = catalog_.trial(set.key.basename())->trial.duration_s();
      } catch (const Error& e) {
        if (http_status(e.code()) == 502) throw;
        j["duration_s"] = nullptr;
        j["error"] = std::string(to_string(e.code())) + ": " + e.what();
      }
      out.push_back(std::move(j));
    }
    return out;
  }

  /// GET /api/trials/{basename}: metadata without the heavy traces.
  Json trial(std::string_view basename) {
    const auto p = catalog_.trial(basename);
    return serialize::metadata_json(*p, nullptr);
  }

  /// GET /api/trials/{basename}/timeline?clean=&intensity_window_s=&downsample=
  Json timeline(std::string_view basename, const Query& q) {
    const bool clean = detail::bool_param(q, "clean", false);
    const double window_s = detail::positive_param(q, "intensity_window_s", 0.1);
    const std::size_t k = detail::count_param(q, "downsample", 1);
    const auto p = catalog_.trial(basename);
    const auto& t = p->trial;

    Json out{{"key", serialize::key_json(t.key)},
             {"grid", {{"start_s", t.grid.start}, {"step_s", t.grid.step * static_cast<double>(k)},
                       {"length", (t.length() + k - 1) / k}}},
             {"downsample", k}};
    Json eeg = Json::array();
    for (std::size_t c = 0; c < t.eeg.size(); ++c)
      eeg.push_back({{"name", t.channel_names[c]}, {"valid", p->channel_status[c].valid},
                     {"reason", analytics::to_string(p->channel_status[c].reason)},
                     {"values", detail::decimate(t.eeg[c], k)}});
    out["eeg"] = std::move(eeg);

    out["cleaned"] = nullptr;
    out["denoise"] = nullptr;
    if (clean) {
      const auto d = catalog_.denoised(basename, denoise_);
      Json cleaned = Json::array();
      for (std::size_t c = 0; c < d->cleaned.size(); ++c)
        cleaned.push_back({{"name", t.channel_names[c]}, {"valid", p->channel_status[c].valid},
                           {"values", detail::decimate(d->cleaned[c], k)}});
      out["cleaned"] = std::move(cleaned);
      out["denoise"] = serialize::denoise_json(*d, t.channel_names);
    }

    out["audio_envelope"] = t.audio_envelope ? detail::decimate(*t.audio_envelope, k) : Json(nullptr);
    out["gaze"] = nullptr;
    out["intensity"] = nullptr;
    if (t.has_gaze()) {
      out["gaze"] = {{"x", detail::decimate(*t.gaze_x, k)}, {"y", detail::decimate(*t.gaze_y, k)}};
      const auto series = analytics::gaze_intensity(*t.gaze_x, *t.gaze_y, t.grid, window_s);
      // bars sampled on the (decimated) grid: horizontal up, vertical down
      std::vector<double> h, v;
      for (std::size_t i = 0; i < t.length(); i += k) {
        const auto w = static_cast<std::size_t>(std::floor((t.grid.at(i) - t.grid.start) / window_s));
        h.push_back(series.windows[w].horizontal);
        v.push_back(-series.windows[w].vertical);
      }
      out["intensity"] = {{"window_s", window_s}, {"peak_px", series.peak_raw}, {"horizontal", h}, {"vertical", v}};
    }
    Json events = Json::array();
    for (const auto& e : t.gaze_events) events.push_back(serialize::event_json(e));
    out["events"] = std::move(events);
    out["warnings"] = p->warnings;
    return out;
  }

  /// GET /api/trials/{basename}/heatmap?event=fixation|saccade
  Json heatmap(std::string_view basename, const Query& q) {
    const auto kind = detail::parse_event_kind(detail::param(q, "event").value_or("fixation"));
    const auto p = catalog_.trial(basename);
    if (!p->trial.has_gaze()) fail(ErrorCode::missing_modality, std::string(basename) + " has no gaze");
    std::vector<align::ScreenPoint> points;
    for (const auto& e : p->trial.gaze_events)
      if (e.event.kind == kind) points.push_back(e.position);
    if (points.empty())
      fail(ErrorCode::no_such_events, "no " + std::string(ingest::to_string(kind)) + " events in " + std::string(basename));
    Json out{{"basename", basename}, {"point_count", points.size()}};
    out.update(serialize::heatmap_json(analytics::kde_heatmap(points, kind)));
    return out;
  }

  /// GET /api/trials/{basename}/correlation?method=&target=&window_s=&stride_s=&clean=
  Json correlation(std::string_view basename, const Query& q) {
    analytics::CorrelationOptions opts;
    opts.method = analytics::parse_method(detail::param(q, "method").value_or("pearson"));
    opts.target = analytics::parse_target(detail::param(q, "target").value_or("audio"));
    opts.window_s = detail::positive_param(q, "window_s", opts.window_s);
    opts.stride_s = detail::positive_param(q, "stride_s", opts.stride_s);
    opts.intensity_window_s = detail::positive_param(q, "intensity_window_s", opts.intensity_window_s);
    const bool clean = detail::bool_param(q, "clean", false);
    const auto p = catalog_.trial(basename);
    std::shared_ptr<const denoise::TrialDenoise> d;
    if (clean) d = catalog_.denoised(basename, denoise_);
    Json out{{"basename", basename}};
    out.update(serialize::correlation_json(analytics::correlate_trial(p->trial, opts, d ? &d->cleaned : nullptr)));
    return out;
  }

  /// GET /api/participants/{id}/dashboard
  Json dashboard(std::string_view participant, const Query& q) {
    const double window_s = detail::positive_param(q, "intensity_window_s", 0.1);
    const auto found = catalog_.discovery();
    std::vector<std::string> names;
    double duration = 0.0, peak = 0.0;
    std::size_t with_gaze = 0;
    std::vector<std::string> channel_order;
    std::map<std::string, std::pair<std::size_t, std::size_t>> validity;  // valid, seen
    for (const auto& set : found->trials) {
      if (set.key.participant != participant) continue;
      const auto p = catalog_.trial(set.key.basename());
      const auto& t = p->trial;
      names.push_back(set.key.basename());
      duration += t.duration_s();
      for (std::size_t c = 0; c < t.channel_names.size(); ++c) {
        auto [it, fresh] = validity.try_emplace(t.channel_names[c], 0, 0);
        if (fresh) channel_order.push_back(t.channel_names[c]);
        it->second.first += p->channel_status[c].valid;
        ++it->second.second;
      }
      if (t.has_gaze()) {
        peak += analytics::gaze_intensity(*t.gaze_x, *t.gaze_y, t.grid, window_s).peak_raw;
        ++with_gaze;
      }
    }
    if (names.empty()) fail(ErrorCode::not_found, "no trials for participant '" + std::string(participant) + "'");

    Json rates = Json::array();
    for (const auto& name : channel_order) {
      const auto [valid, seen] = validity[name];
      rates.push_back({{"name", name}, {"rate", static_cast<double>(valid) / static_cast<double>(seen)}});
    }
    return {{"participant", participant},
            {"trial_count", names.size()},
            {"trials", names},
            {"mean_duration_s", duration / static_cast<double>(names.size())},
            {"channel_validity", std::move(rates)},
            {"intensity_window_s", window_s},
            {"mean_intensity_peak_px", with_gaze ? Json(peak / static_cast<double>(with_gaze)) : Json(nullptr)}};
  }

 private:
  static ApiResponse ok(const Json& j) { return {200, j.dump()}; }

  TrialCatalog& catalog_;
  DenoiseParams denoise_;
};

}  // namespace meedav::service
