#pragma once

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meedav/export.hpp"
#include "meedav/ingest/backends.hpp"
#include "meedav/service/server.hpp"
#include "meedav/synth.hpp"

namespace meedav::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_backend = 2,
  exit_unknown_trial = 3,
  exit_write = 4,
  exit_missing_modality = 5,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::backend_unavailable:
    case ErrorCode::network_error:
    case ErrorCode::rate_limited:
    case ErrorCode::not_found: return exit_backend;
    case ErrorCode::unknown_trial: return exit_unknown_trial;
    case ErrorCode::io_error: return exit_write;
    case ErrorCode::missing_modality:
    case ErrorCode::no_such_events: return exit_missing_modality;
    default: return exit_failure;
  }
}

struct AnalyzeArgs {
  std::string basename;
  std::string feature;
  std::string out_dir = ".";
  std::string event = "fixation";
  std::string method = "pearson";
  std::string target = "audio";
  double window_s = 1.0;
  double stride_s = 0.5;
  double intensity_window_s = 0.1;
  bool clean = false;
};

namespace detail {

inline std::string intensity_csv(const analytics::IntensitySeries& s) {
  std::string out = "start_s,horizontal,vertical,total\n";
  for (const auto& w : s.windows)
    out += format_double(w.start_s) + "," + format_double(w.horizontal) + "," + format_double(w.vertical) + "," +
           format_double(w.total) + "\n";
  return out;
}

inline std::string grid_csv(const analytics::HeatmapGrid& g) {
  std::string out;
  for (const auto& row : g.density) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
    out += "\n";
  }
  return out;
}

inline std::string correlation_csv(const analytics::CorrelationReport& r) {
  std::string out = "channel,mean,defined_windows,windows\n";
  for (const auto& ch : r.per_channel) {
    std::size_t defined = 0;
    for (const auto& w : ch.result.windows) defined += w.coefficient.has_value();
    out += ch.channel + "," + (ch.result.mean ? format_double(*ch.result.mean) : std::string()) + "," +
           std::to_string(defined) + "," + std::to_string(ch.result.windows.size()) + "\n";
  }
  return out;
}

}  // namespace detail

/// Analytics files for one trial, named after the basename and feature.
inline std::vector<exporter::ExportedFile> analyze(service::TrialCatalog& catalog, const AnalyzeArgs& a) {
  const auto p = catalog.trial(a.basename);
  const auto& t = p->trial;
  const auto& b = a.basename;
  if (a.feature == "intensity") {
    if (!t.has_gaze()) fail(ErrorCode::missing_modality, b + " has no gaze");
    const auto s = analytics::gaze_intensity(*t.gaze_x, *t.gaze_y, t.grid, a.intensity_window_s);
    return {{b + ".intensity.csv", detail::intensity_csv(s)},
            {b + ".intensity.json", serialize::intensity_json(s).dump(2) + "\n"}};
  }
  if (a.feature == "heatmap") {
    service::Api api(catalog);
    const auto grid_json = api.heatmap(b, {{"event", a.event}});
    analytics::HeatmapGrid g;
    g.density = grid_json.at("density").get<std::vector<std::vector<double>>>();
    return {{b + ".heatmap." + a.event + ".csv", detail::grid_csv(g)},
            {b + ".heatmap." + a.event + ".json", grid_json.dump() + "\n"}};
  }
  if (a.feature == "correlation") {
    analytics::CorrelationOptions opts{analytics::parse_method(a.method), analytics::parse_target(a.target), a.window_s,
                                       a.stride_s, a.intensity_window_s};
    std::shared_ptr<const denoise::TrialDenoise> d;
    if (a.clean) d = catalog.denoised(b);
    const auto r = analytics::correlate_trial(t, opts, d ? &d->cleaned : nullptr);
    return {{b + ".correlation.csv", detail::correlation_csv(r)},
            {b + ".correlation.json", serialize::correlation_json(r).dump(2) + "\n"}};
  }
  fail(ErrorCode::bad_parameter, "feature must be intensity, heatmap or correlation");
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Multimodal EEG, eye-tracking and audio explorer"};
  app.require_subcommand(1);
  std::string backend_spec;
  app.add_option("--backend", backend_spec, "local:<dir> or github:<owner>/<repo>[@ref]; default $MEEDAV_BACKEND");

  auto* list = app.add_subcommand("list", "List trials");
  std::string participant, stimulus;
  list->add_option("--participant", participant);
  list->add_option("--stimulus", stimulus);

  auto* exp = app.add_subcommand("export", "Export an aligned trial");
  std::string export_basename, export_out = ".", export_format = "csv";
  bool export_clean = false;
  exp->add_option("basename", export_basename)->required();
  exp->add_flag("--clean", export_clean, "Add ICA-cleaned EEG");
  exp->add_option("--out", export_out);
  exp->add_option("--format", export_format)->check(CLI::IsMember({"csv", "json"}));

  auto* an = app.add_subcommand("analyze", "Compute an analytics feature to files");
  AnalyzeArgs aa;
  an->add_option("basename", aa.basename)->required();
  an->add_option("--feature", aa.feature)->required()->check(CLI::IsMember({"intensity", "heatmap", "correlation"}));
  an->add_option("--out", aa.out_dir);
  an->add_option("--event", aa.event);
  an->add_option("--method", aa.method);
  an->add_option("--target", aa.target);
  an->add_option("--window-s", aa.window_s);
  an->add_option("--stride-s", aa.stride_s);
  an->add_option("--intensity-window-s", aa.intensity_window_s);
  an->add_flag("--clean", aa.clean);

  auto* syn = app.add_subcommand("synth", "Write a synthetic dataset with ground truth");
  std::string synth_out;
  synth::SynthOptions so;
  syn->add_option("--out", synth_out)->required();
  syn->add_option("--seed", so.seed);
  syn->add_option("--trials", so.trials)->check(CLI::NonNegativeNumber);
  syn->add_option("--duration-s", so.duration_s)->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  service::ServerOptions server_opts;
  server_opts.port = service::port_from_env();
  std::string ui_dir;
  serve->add_option("--host", server_opts.host);
  serve->add_option("--port", server_opts.port);
  serve->add_option("--ui-dir", ui_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*syn) {
      synth::write_synthetic_dataset(synth_out, so);
      out << "wrote " << so.trials << " trials to " << synth_out << "\n";
      return exit_ok;
    }

    if (backend_spec.empty()) backend_spec = ingest::backend_spec_from_env();
    service::TrialCatalog catalog(ingest::make_backend(backend_spec));

    if (*list) {
      service::Query q;
      if (!participant.empty()) q.emplace("participant", participant);
      if (!stimulus.empty()) q.emplace("stimulus", stimulus);
      service::Api api(catalog);
      const auto rows = api.trials(q);
      out << "basename\tparticipant\tstimulus\torder\ttask\tmodalities\tduration_s\n";
      for (const auto& r : rows) {
        std::string modalities;
        for (const auto& m : r.at("modalities")) modalities += (modalities.empty() ? "" : "+") + m.get<std::string>();
        out << r.at("basename").get<std::string>() << "\t" << r.at("participant").get<std::string>() << "\t"
            << r.at("stimulus").get<std::string>() << "\t" << r.at("order").get<std::string>() << "\t"
            << r.at("task").get<std::string>() << "\t" << modalities << "\t"
            << (r.at("duration_s").is_null() ? std::string("-") : format_double(r.at("duration_s").get<double>()))
            << "\n";
      }
      for (const auto& w : catalog.discovery()->warnings) err << "warning: " << w << "\n";
      return exit_ok;
    }

    if (*exp) {
      const auto p = catalog.trial(export_basename);
      std::shared_ptr<const denoise::TrialDenoise> d;
      if (export_clean) d = catalog.denoised(export_basename);
      const auto files = exporter::export_trial(*p, d.get(), exporter::parse_format(export_format));
      exporter::write_files(files, export_out);
      for (const auto& f : files) out << (std::filesystem::path(export_out) / f.name).string() << "\n";
      return exit_ok;
    }

    if (*an) {
      const auto files = analyze(catalog, aa);
      exporter::write_files(files, aa.out_dir);
      for (const auto& f : files) out << (std::filesystem::path(aa.out_dir) / f.name).string() << "\n";
      return exit_ok;
    }

    if (*serve) {
      if (!ui_dir.empty()) server_opts.ui_dir = ui_dir;
      catalog.discovery();
      service::Api api(catalog);
      httplib::Server server;
      service::mount(server, api, server_opts);
      out << "listening on http://" << server_opts.host << ":" << server_opts.port << std::endl;
      if (!server.listen(server_opts.host, server_opts.port)) {
        err << "error: cannot listen on " << server_opts.host << ":" << server_opts.port << "\n";
        return exit_failure;
      }
      return exit_ok;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_failure;
}

}  // namespace meedav::cli
