#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "meedav/analytics/correlation.hpp"
#include "meedav/analytics/envelope.hpp"
#include "meedav/analytics/intensity.hpp"
#include "meedav/analytics/kde.hpp"
#include "meedav/analytics/validity.hpp"
#include "support/oracles.hpp"

using namespace meedav;
using namespace meedav::analytics;
using align::ScreenPoint;
using align::UniformAxis;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::io_error;
}

UniformAxis grid_of(std::size_t n) { return {0.0, 1.0 / 256.0, n}; }

std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n, double scale) {
  std::normal_distribution<double> step(0.0, scale);
  std::vector<double> v(n);
  double pos = 640.0;
  for (auto& x : v) x = pos += step(rng);
  return v;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

// ---- motion and intensity -------------------------------------------------

TEST(GazeMotion, Examples) {
  std::vector<double> x{0, 10, 10}, y{0, 0, 5};
  EXPECT_EQ(gaze_motion_magnitude(x, y).magnitude, (std::vector<double>{10, 5}));
  std::vector<double> c(5, 300.0);
  EXPECT_EQ(gaze_motion_magnitude(c, c).magnitude, std::vector<double>(4, 0.0));
  std::vector<double> dx{0, 3}, dy{0, 4};
  EXPECT_EQ(gaze_motion_magnitude(dx, dy).magnitude, std::vector<double>{7});
  EXPECT_EQ(code_of([] { gaze_motion_magnitude(std::vector<double>{1}, std::vector<double>{1}); }), ErrorCode::insufficient_data);
}

TEST(GazeIntensity, SingleWindowSelfNormalizes) {
  std::vector<double> x{0, 10, 10}, y{0, 0, 5};
  auto s = gaze_intensity(x, y, grid_of(3), 1.0);
  ASSERT_EQ(s.windows.size(), 1u);
  EXPECT_EQ(s.windows[0].total, 1.0);
  EXPECT_DOUBLE_EQ(s.windows[0].horizontal, 10.0 / 15.0);
  EXPECT_DOUBLE_EQ(s.windows[0].vertical, 5.0 / 15.0);
  EXPECT_EQ(s.peak_raw, 15.0);
}

TEST(GazeIntensity, TwoWindowsDivideByMaximum) {
  // step 0.5 s and window 1 s: samples 0,1 in window 0; 2,3 in window 1
  std::vector<double> x{0, 20, 20, 25}, y{0, 0, 0, 0};
  auto s = gaze_intensity(x, y, {0.0, 0.5, 4}, 1.0);
  ASSERT_EQ(s.windows.size(), 2u);
  EXPECT_EQ(s.windows[0].total, 1.0);
  EXPECT_EQ(s.windows[1].total, 0.25);
}

TEST(GazeIntensity, StillGazeIsAllZero) {
  std::vector<double> c(100, 500.0);
  auto s = gaze_intensity(c, c, grid_of(100));
  for (const auto& w : s.windows) EXPECT_EQ(w.total, 0.0);
  EXPECT_EQ(code_of([&] { gaze_intensity(c, c, grid_of(100), 0.0); }), ErrorCode::bad_parameter);
}

TEST(GazeIntensity, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 50 + rng() % 2000;
    const double window = 0.05 + 0.05 * static_cast<double>(rng() % 10);
    auto x = random_walk(rng, n, 8.0), y = random_walk(rng, n, 5.0);
    auto s = gaze_intensity(x, y, grid_of(n), window);
    auto o = oracle::intensity(x, y, 1.0 / 256.0, window);
    ASSERT_EQ(s.windows.size(), o.total.size());
    for (std::size_t k = 0; k < o.total.size(); ++k) {
      EXPECT_NEAR(s.windows[k].total, o.total[k], 1e-12);
      EXPECT_NEAR(s.windows[k].horizontal, o.horizontal[k], 1e-12);
      EXPECT_NEAR(s.windows[k].vertical, o.vertical[k], 1e-12);
    }
  }
}

TEST(GazeIntensity, NormalizationAndDecomposition) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 1500;
    auto x = random_walk(rng, n, 6.0), y = random_walk(rng, n, 6.0);
    auto s = gaze_intensity(x, y, grid_of(n));
    double max_total = 0.0;
    for (const auto& w : s.windows) {
      max_total = std::max(max_total, w.total);
      EXPECT_GE(w.horizontal, 0.0);
      EXPECT_LE(w.horizontal, 1.0);
      EXPECT_GE(w.vertical, 0.0);
      EXPECT_LE(w.vertical, 1.0);
      EXPECT_NEAR(w.horizontal + w.vertical, w.total, 1e-12);
    }
    EXPECT_EQ(max_total, 1.0);
  }
}

TEST(GazeIntensity, TranslationInvariance) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> shift(-300.0, 300.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 10 + rng() % 800;
    auto x = random_walk(rng, n, 4.0), y = random_walk(rng, n, 4.0);
    // power-of-two shifts keep the differences exact
    const double c = std::ldexp(std::round(shift(rng)), 0), d = std::ldexp(std::round(shift(rng)), 0);
    auto xs = x, ys = y;
    for (auto& v : xs) v += c;
    for (auto& v : ys) v += d;
    auto a = gaze_intensity(x, y, grid_of(n)), b = gaze_intensity(xs, ys, grid_of(n));
    ASSERT_EQ(a.windows.size(), b.windows.size());
    for (std::size_t k = 0; k < a.windows.size(); ++k) EXPECT_NEAR(a.windows[k].total, b.windows[k].total, 1e-9);
  }
}

// ---- validity -------------------------------------------------------------

TEST(ChannelValidity, Examples) {
  std::vector<double> flat(256, 812.0), sine(256), square(256);
  for (std::size_t i = 0; i < 256; ++i) {
    sine[i] = 800.0 + 50.0 * std::sin(2 * std::numbers::pi * 10.0 * static_cast<double>(i) / 256.0);
    square[i] = (i / 16) % 2 ? 0.0 : 1900.0;
  }
  auto st = channel_validity({flat, sine, square});
  EXPECT_EQ(st[0].reason, ValidityReason::flatline);
  EXPECT_FALSE(st[0].valid);
  EXPECT_EQ(st[1].reason, ValidityReason::ok);
  EXPECT_TRUE(st[1].valid);
  EXPECT_EQ(st[2].reason, ValidityReason::saturated);
  EXPECT_EQ(st[2].p2p, 1900.0);
  EXPECT_EQ(validity_flags(st), (std::vector<bool>{false, true, false}));
}

TEST(ChannelValidity, MonotoneUnderAmplitudeScaling) {
  std::mt19937_64 rng(14);
  auto rank = [](ValidityReason r) { return r == ValidityReason::flatline ? 0 : r == ValidityReason::ok ? 1 : 2; };
  for (int trial = 0; trial < 40; ++trial) {
    auto base = random_values(rng, 64);
    int previous = 0;
    for (double scale = 1e-3; scale < 1e4; scale *= 1.7) {
      std::vector<double> ch(base);
      for (auto& v : ch) v *= scale;
      const auto st = channel_validity({ch}).front();
      EXPECT_EQ(st.valid, st.reason == ValidityReason::ok);
      EXPECT_GE(rank(st.reason), previous);
      previous = rank(st.reason);
    }
    EXPECT_EQ(previous, 2);
  }
}

// ---- KDE ------------------------------------------------------------------

namespace {

std::pair<std::size_t, std::size_t> argmax_cell(const HeatmapGrid& g) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  for (std::size_t r = 0; r < heatmap_cells; ++r)
    for (std::size_t c = 0; c < heatmap_cells; ++c)
      if (g.density[r][c] > g.density[best.first][best.second]) best = {r, c};
  return best;
}

std::vector<std::pair<std::size_t, std::size_t>> local_maxima(const HeatmapGrid& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto n = static_cast<long>(heatmap_cells);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) {
      const double v = g.density[r][c];
      bool peak = v > 1e-300;
      for (long dr = -1; dr <= 1 && peak; ++dr)
        for (long dc = -1; dc <= 1 && peak; ++dc) {
          if ((dr == 0 && dc == 0) || r + dr < 0 || c + dc < 0 || r + dr >= n || c + dc >= n) continue;
          peak = v > g.density[r + dr][c + dc];
        }
      if (peak) out.emplace_back(r, c);
    }
  return out;
}

}  // namespace

TEST(KdeHeatmap, SinglePointPeaksAtItsCell) {
  std::vector<ScreenPoint> pts(5, {640.0, 512.0});
  auto g = kde_heatmap(pts, ingest::EventKind::fixation);
  EXPECT_EQ(g.density.size(), 100u);
  EXPECT_EQ(g.density.front().size(), 100u);
  // 640 / 12.8 = 50 and 512 / 10.24 = 50: the point sits on a cell corner
  auto [r, c] = argmax_cell(g);
  EXPECT_TRUE(r == 49 || r == 50);
  EXPECT_TRUE(c == 49 || c == 50);
  EXPECT_DOUBLE_EQ(g.bandwidth.x, 6.4);
  EXPECT_DOUBLE_EQ(g.bandwidth.y, 5.12);

  std::vector<ScreenPoint> off{{100.0, 900.0}};
  auto [r2, c2] = argmax_cell(kde_heatmap(off, ingest::EventKind::saccade));
  EXPECT_EQ(r2, static_cast<std::size_t>(900.0 / 10.24));
  EXPECT_EQ(c2, static_cast<std::size_t>(100.0 / 12.8));
}

TEST(KdeHeatmap, TwoClustersTwoMaxima) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> jitter(0.0, 10.0);
  std::vector<ScreenPoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({200.0 + jitter(rng), 200.0 + jitter(rng)});
  for (int i = 0; i < 50; ++i) pts.push_back({1100.0 + jitter(rng), 800.0 + jitter(rng)});
  auto g = kde_heatmap(pts, ingest::EventKind::fixation, Bandwidth{30.0, 30.0});
  auto peaks = local_maxima(g);
  ASSERT_EQ(peaks.size(), 2u);
  std::sort(peaks.begin(), peaks.end());
  EXPECT_NEAR(g.cell_center_y(peaks[0].first), 200.0, 20.0);
  EXPECT_NEAR(g.cell_center_x(peaks[0].second), 200.0, 20.0);
  EXPECT_NEAR(g.cell_center_y(peaks[1].first), 800.0, 20.0);
  EXPECT_NEAR(g.cell_center_x(peaks[1].second), 1100.0, 20.0);
}

TEST(KdeHeatmap, TwoClustersWithScottBandwidth) {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> jitter(0.0, 10.0);
  std::vector<ScreenPoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({200.0 + jitter(rng), 200.0 + jitter(rng)});
  for (int i = 0; i < 50; ++i) pts.push_back({1100.0 + jitter(rng), 800.0 + jitter(rng)});
  EXPECT_EQ(local_maxima(kde_heatmap(pts, ingest::EventKind::fixation)).size(), 2u);
}

TEST(KdeHeatmap, MatchesDirectEvaluation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(0, 1280), uy(0, 1024);
  std::vector<ScreenPoint> pts(40);
  for (auto& p : pts) p = {ux(rng), uy(rng)};
  auto g = kde_heatmap(pts, ingest::EventKind::fixation);
  const double hx = g.bandwidth.x, hy = g.bandwidth.y;
  for (std::size_t r = 0; r < 100; r += 7)
    for (std::size_t c = 0; c < 100; c += 11) {
      const double cx = (c + 0.5) * 12.8, cy = (r + 0.5) * 10.24;
      double f = 0.0;
      for (const auto& p : pts)
        f += std::exp(-0.5 * ((cx - p.x) * (cx - p.x) / (hx * hx) + (cy - p.y) * (cy - p.y) / (hy * hy)));
      f /= 2 * std::numbers::pi * hx * hy * pts.size();
      EXPECT_NEAR(g.density[r][c], f, 1e-12 * (1.0 + f));
    }
}

TEST(KdeHeatmap, PositivityAndMass) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> ux(200, 1080), uy(200, 824);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<ScreenPoint> pts(500);
    for (auto& p : pts) p = {ux(rng), uy(rng)};
    auto g = kde_heatmap(pts, ingest::EventKind::fixation);
    for (const auto& row : g.density)
      for (double d : row) EXPECT_GE(d, 0.0);
    EXPECT_NEAR(g.mass(), 1.0, 0.05);
  }
}

TEST(KdeHeatmap, ScottRule) {
  std::vector<ScreenPoint> pts{{100, 100}, {300, 500}, {500, 900}, {700, 300}};
  auto bw = scott_bandwidth(pts);
  const double factor = std::pow(4.0, -1.0 / 6.0);
  EXPECT_NEAR(bw.x, std::sqrt(200000.0 / 3.0) * factor, 1e-9);
  EXPECT_NEAR(bw.y, std::sqrt(350000.0 / 3.0) * factor, 1e-9);
  EXPECT_EQ(code_of([] { kde_heatmap({}, ingest::EventKind::fixation); }), ErrorCode::empty_points);
}

// ---- envelope -------------------------------------------------------------

TEST(AudioEnvelope, Examples) {
  std::vector<double> half(16000, 0.5);
  for (double v : audio_envelope(half, 16000, 0.01).values) EXPECT_DOUBLE_EQ(v, 1.0);
  std::vector<double> silence(1600, 0.0);
  for (double v : audio_envelope(silence, 16000, 0.01).values) EXPECT_EQ(v, 0.0);

  std::vector<double> sine(16000);
  for (std::size_t i = 0; i < sine.size(); ++i) sine[i] = std::sin(2 * std::numbers::pi * 440.0 * static_cast<double>(i) / 16000.0);
  auto rms = frame_rms(sine, 16000, 0.5);
  for (double v : rms.values) EXPECT_NEAR(v, 1.0 / std::sqrt(2.0), 0.01 / std::sqrt(2.0));
  EXPECT_EQ(code_of([] { audio_envelope({}, 16000, 0.01); }), ErrorCode::empty_input);
}

TEST(AudioEnvelope, FrameLayout) {
  std::vector<double> s(250, 1.0);
  auto env = frame_rms(s, 1000, 0.1);
  ASSERT_EQ(env.values.size(), 3u);
  EXPECT_DOUBLE_EQ(env.times[0], 0.0495);
  EXPECT_DOUBLE_EQ(env.times[2], 0.2245);
  for (double v : env.values) EXPECT_GE(v, 0.0);
}

// ---- correlation ----------------------------------------------------------

TEST(Correlation, Examples) {
  std::vector<double> a{1, 2, 3};
  EXPECT_DOUBLE_EQ(*pearson(a, std::vector<double>{2, 4, 6}), 1.0);
  EXPECT_DOUBLE_EQ(*pearson(a, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(*pearson(a, std::vector<double>{1, 3, 2}), 0.5);
  EXPECT_FALSE(pearson(a, std::vector<double>{4, 4, 4}));
  EXPECT_FALSE(spearman(a, std::vector<double>{4, 4, 4}));
  EXPECT_FALSE(kendall_tau_b(a, std::vector<double>{4, 4, 4}));
  EXPECT_DOUBLE_EQ(*kendall_tau_b(a, std::vector<double>{1, 3, 2}), 1.0 / 3.0);
}

TEST(Correlation, WindowedErrorsAndLayout) {
  std::vector<double> a(10), b(9);
  EXPECT_EQ(code_of([&] { windowed_correlation(a, b, CorrelationMethod::pearson, 0.05, 0.05); }), ErrorCode::length_mismatch);
  std::vector<double> c(10);
  EXPECT_EQ(code_of([&] { windowed_correlation(a, c, CorrelationMethod::pearson, 0.01, 0.01); }), ErrorCode::window_too_small);

  std::vector<double> x(250), y(250);
  for (std::size_t i = 0; i < 250; ++i) {
    x[i] = static_cast<double>(i);
    y[i] = i < 100 ? 5.0 : -static_cast<double>(i);
  }
  auto w = windowed_correlation(x, y, CorrelationMethod::pearson, 1.0, 0.5);
  ASSERT_EQ(w.windows.size(), 4u);  // starts 0, 50, 100, 150
  EXPECT_FALSE(w.windows[0].coefficient);
  EXPECT_DOUBLE_EQ(w.windows[1].start_s, 0.5);
  EXPECT_NEAR(*w.windows[2].coefficient, -1.0, 1e-12);
  EXPECT_NEAR(*w.mean, (*w.windows[1].coefficient + *w.windows[2].coefficient + *w.windows[3].coefficient) / 3.0, 1e-15);
}

TEST(Correlation, PearsonMatchesReference) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 200;
    auto x = random_values(rng, n), y = random_values(rng, n);
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.3 * x[i];
    EXPECT_NEAR(*pearson(x, y), oracle::pearson_reference(x, y), 1e-12);
  }
}

TEST(Correlation, BoundsAndAffineInvariance) {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> scale(0.01, 100.0), offset(-1000.0, 1000.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    auto x = random_values(rng, n), y = random_values(rng, n);
    if (trial % 3 == 0)
      for (auto& v : y) v = std::round(v);
    for (auto m : {CorrelationMethod::pearson, CorrelationMethod::spearman, CorrelationMethod::kendall}) {
      if (auto r = correlate(m, x, y)) {
        EXPECT_GE(*r, -1.0);
        EXPECT_LE(*r, 1.0);
      }
    }
    auto xa = x;
    const double s = scale(rng), o = offset(rng);
    for (auto& v : xa) v = s * v + o;
    auto r0 = pearson(x, y), r1 = pearson(xa, y);
    ASSERT_EQ(r0.has_value(), r1.has_value());
    if (r0) EXPECT_NEAR(*r0, *r1, 1e-9);
  }
}

TEST(Correlation, AverageRanksMatchCounting) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng() % 6);
    EXPECT_EQ(average_ranks(v), oracle::ranks(v));
  }
}

namespace {

// every sequence over {0..alphabet-1} of length n
std::vector<std::vector<double>> all_sequences(int alphabet, std::size_t n) {
  std::vector<std::vector<double>> out;
  std::vector<double> cur(n, 0.0);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < n && cur[i] == alphabet - 1) cur[i++] = 0.0;
    if (i == n) break;
    cur[i] += 1.0;
  }
  return out;
}

void check_rank_methods_exhaustive(int alphabet, std::size_t n) {
  const auto seqs = all_sequences(alphabet, n);
  std::size_t checked = 0;
  for (const auto& x : seqs)
    for (const auto& y : seqs) {
      const double ks = oracle::kendall_tau_b(x, y);
      const auto kl = kendall_tau_b(x, y);
      ASSERT_EQ(kl.has_value(), !std::isnan(ks));
      if (kl) ASSERT_EQ(*kl, ks);
      const double ss = oracle::spearman(x, y);
      const auto sl = spearman(x, y);
      ASSERT_EQ(sl.has_value(), !std::isnan(ss));
      if (sl) ASSERT_EQ(*sl, ss);
      ++checked;
    }
  EXPECT_EQ(checked, seqs.size() * seqs.size());
}

}  // namespace

TEST(Correlation, RankMethodsExhaustiveTernary) {
  for (std::size_t n = 2; n <= 6; ++n) check_rank_methods_exhaustive(3, n);
}

TEST(Correlation, RankMethodsExhaustiveBinary) {
  for (std::size_t n = 2; n <= 8; ++n) check_rank_methods_exhaustive(2, n);
}

TEST(Correlation, RankMethodsRandomEightElementWindows) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = static_cast<double>(rng() % 5);
    for (auto& v : y) v = static_cast<double>(rng() % 8) * 0.5;
    const auto kl = kendall_tau_b(x, y);
    const double ko = oracle::kendall_tau_b(x, y);
    ASSERT_EQ(kl.has_value(), !std::isnan(ko));
    if (kl) ASSERT_EQ(*kl, ko);
    const auto sl = spearman(x, y);
    const double so = oracle::spearman(x, y);
    ASSERT_EQ(sl.has_value(), !std::isnan(so));
    if (sl) ASSERT_EQ(*sl, so);
  }
}

TEST(Correlation, ParseNames) {
  EXPECT_EQ(parse_method("kendall"), CorrelationMethod::kendall);
  EXPECT_EQ(parse_target("gaze"), CorrelationTarget::gaze_intensity);
  EXPECT_EQ(code_of([] { parse_method("minkowski"); }), ErrorCode::bad_parameter);
}

// ---- per-trial correlation ------------------------------------------------

namespace {

align::AlignedTrial envelope_trial(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  align::AlignedTrial t;
  t.key = ingest::parse_trial_basename("P01_S001_01_Read");
  t.grid = grid_of(n);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / 256.0;
    env[i] = 0.5 + 0.5 * std::sin(2 * std::numbers::pi * 0.7 * s) * std::sin(2 * std::numbers::pi * 3.1 * s);
  }
  t.audio = env;
  t.audio_envelope = env;
  t.channel_names = {"RAW_TP9", "RAW_AF7"};
  t.eeg = {env, random_values(rng, n)};
  return t;
}

}  // namespace

TEST(CorrelateTrial, SelfCorrelationAndNoise) {
  // 50.5 s at 256 Hz: 100 windows of 1 s with a 0.5 s stride
  auto trial = envelope_trial(50 * 256 + 129, 23);
  auto report = correlate_trial(trial, {});
  ASSERT_EQ(report.per_channel.size(), 2u);
  EXPECT_EQ(report.per_channel[0].channel, "RAW_TP9");
  EXPECT_EQ(report.per_channel[0].result.windows.size(), 100u);
  EXPECT_NEAR(*report.per_channel[0].result.mean, 1.0, 1e-9);
  EXPECT_LT(std::abs(*report.per_channel[1].result.mean), 0.3);
  EXPECT_FALSE(report.cleaned);
}

TEST(CorrelateTrial, UsesCleanedWhenGiven) {
  auto trial = envelope_trial(2048, 24);
  auto cleaned = trial.eeg;
  std::swap(cleaned[0], cleaned[1]);
  auto report = correlate_trial(trial, {}, &cleaned);
  EXPECT_TRUE(report.cleaned);
  EXPECT_NEAR(*report.per_channel[1].result.mean, 1.0, 1e-9);
  std::vector<std::vector<double>> wrong(1, cleaned[0]);
  EXPECT_EQ(code_of([&] { correlate_trial(trial, {}, &wrong); }), ErrorCode::length_mismatch);
}

TEST(CorrelateTrial, MissingModality) {
  auto trial = envelope_trial(1024, 25);
  EXPECT_EQ(code_of([&] { correlate_trial(trial, {.target = CorrelationTarget::gaze_intensity}); }), ErrorCode::missing_modality);
  trial.audio.reset();
  trial.audio_envelope.reset();
  EXPECT_EQ(code_of([&] { correlate_trial(trial, {}); }), ErrorCode::missing_modality);
}

TEST(CorrelateTrial, GazeTarget) {
  auto trial = envelope_trial(1024, 26);
  std::mt19937_64 rng(27);
  trial.gaze_x = random_walk(rng, 1024, 3.0);
  trial.gaze_y = random_walk(rng, 1024, 3.0);
  auto report = correlate_trial(trial, {.method = CorrelationMethod::spearman, .target = CorrelationTarget::gaze_intensity});
  for (const auto& ch : report.per_channel)
    for (const auto& w : ch.result.windows)
      if (w.coefficient) {
        EXPECT_GE(*w.coefficient, -1.0);
        EXPECT_LE(*w.coefficient, 1.0);
      }
}
