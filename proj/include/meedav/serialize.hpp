#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "meedav/analytics/correlation.hpp"
#include "meedav/analytics/intensity.hpp"
#include "meedav/analytics/kde.hpp"
#include "meedav/pipeline.hpp"

// JSON views of library results. Keys keep insertion order so identical
// inputs always serialize to identical bytes.
namespace meedav::serialize {

using Json = nlohmann::ordered_json;

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json key_json(const ingest::TrialKey& k) {
  return {{"basename", k.basename()}, {"participant", k.participant}, {"stimulus", k.stimulus},
          {"order", k.order}, {"task", k.task}};
}

inline Json grid_json(const align::UniformAxis& g) {
  return {{"start_s", g.start}, {"step_s", g.step}, {"length", g.length}};
}

inline Json modalities_json(const align::AlignedTrial& t) {
  Json m = Json::array({"eeg"});
  if (t.has_gaze()) m.push_back("gaze");
  if (t.has_audio()) m.push_back("audio");
  return m;
}

inline Json event_json(const align::EventMarker& e) {
  return {{"time_s", e.time_s}, {"kind", ingest::to_string(e.event.kind)}, {"label", e.event.label},
          {"x", e.position.x}, {"y", e.position.y}};
}

inline Json channel_status_json(const std::vector<std::string>& names,
                                const std::vector<analytics::ChannelStatus>& status) {
  Json out = Json::array();
  for (std::size_t c = 0; c < names.size(); ++c)
    out.push_back({{"name", names[c]}, {"valid", status[c].valid}, {"reason", analytics::to_string(status[c].reason)},
                   {"p2p_uv", status[c].p2p}});
  return out;
}

inline Json intensity_json(const analytics::IntensitySeries& s) {
  Json windows = Json::array();
  for (const auto& w : s.windows)
    windows.push_back({{"start_s", w.start_s}, {"horizontal", w.horizontal}, {"vertical", w.vertical}, {"total", w.total}});
  return {{"window_s", s.window_s}, {"peak_px", s.peak_raw}, {"windows", std::move(windows)}};
}

inline Json heatmap_json(const analytics::HeatmapGrid& g) {
  return {{"event", ingest::to_string(g.event_kind)},
          {"rows", g.density.size()},
          {"cols", g.density.empty() ? 0 : g.density.front().size()},
          {"x_max", g.x_max},
          {"y_max", g.y_max},
          {"bandwidth", {{"x", g.bandwidth.x}, {"y", g.bandwidth.y}}},
          {"density", g.density}};
}

inline Json correlation_json(const analytics::CorrelationReport& r) {
  Json channels = Json::array();
  for (const auto& ch : r.per_channel) {
    Json windows = Json::array();
    for (const auto& w : ch.result.windows) windows.push_back({{"start_s", w.start_s}, {"r", optional_number(w.coefficient)}});
    channels.push_back({{"name", ch.channel}, {"mean", optional_number(ch.result.mean)}, {"windows", std::move(windows)}});
  }
  return {{"method", analytics::to_string(r.options.method)},
          {"target", analytics::to_string(r.options.target)},
          {"window_s", r.options.window_s},
          {"stride_s", r.options.stride_s},
          {"cleaned", r.cleaned},
          {"channels", std::move(channels)}};
}

/// Summary of a trial denoise: which channels went in, which components came out.
inline Json denoise_json(const denoise::TrialDenoise& d, const std::vector<std::string>& names) {
  Json channels = Json::array();
  for (auto c : d.channels) channels.push_back(names[c]);
  Json out{{"channels", std::move(channels)}};
  if (!d.result) {
    out["rejected_components"] = Json::array();
    out["converged"] = nullptr;
    return out;
  }
  out["rejected_components"] = d.result->rejected;
  out["converged"] = d.result->converged;
  out["iterations"] = d.result->iterations;
  out["component_kurtosis"] = d.result->stats.kurtosis;
  out["component_p2p"] = d.result->stats.p2p;
  return out;
}

inline Json trial_summary_json(const PreparedTrial& p) {
  Json j = key_json(p.trial.key);
  j["modalities"] = modalities_json(p.trial);
  j["duration_s"] = p.trial.duration_s();
  return j;
}

inline Json metadata_json(const PreparedTrial& p, const denoise::TrialDenoise* d) {
  const auto& t = p.trial;
  Json j{{"key", key_json(t.key)},
         {"modalities", modalities_json(t)},
         {"grid", grid_json(t.grid)},
         {"duration_s", t.duration_s()},
         {"channels", channel_status_json(t.channel_names, p.channel_status)},
         {"event_count", t.gaze_events.size()},
         {"warnings", p.warnings}};
  j["denoise"] = d ? denoise_json(*d, t.channel_names) : Json(nullptr);
  return j;
}

}  // namespace meedav::serialize
