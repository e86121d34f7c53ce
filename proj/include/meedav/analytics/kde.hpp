#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "meedav/align/resample.hpp"
#include "meedav/error.hpp"
#include "meedav/ingest/records.hpp"

namespace meedav::analytics {

inline constexpr std::size_t heatmap_cells = 100;

struct Bandwidth {
  double x = 0.0;
  double y = 0.0;
};

/// Gaussian KDE sampled at the 100 x 100 cell centres of the screen.
/// `density[row][col]`: row indexes y (top to bottom), col indexes x.
struct HeatmapGrid {
  std::vector<std::vector<double>> density;
  double x_max = align::screen_width_px;
  double y_max = align::screen_height_px;
  ingest::EventKind event_kind = ingest::EventKind::fixation;
  Bandwidth bandwidth;

  double cell_width() const { return x_max / heatmap_cells; }
  double cell_height() const { return y_max / heatmap_cells; }
  double cell_center_x(std::size_t col) const { return (static_cast<double>(col) + 0.5) * cell_width(); }
  double cell_center_y(std::size_t row) const { return (static_cast<double>(row) + 0.5) * cell_height(); }

  /// Riemann sum of density over the screen.
  double mass() const {
    double sum = 0.0;
    for (const auto& row : density)
      for (double d : row) sum += d;
    return sum * cell_width() * cell_height();
  }
};

namespace detail {

inline double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double a : v) mean += a;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double a : v) ss += (a - mean) * (a - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// Scott's rule per axis, sigma * n^(-1/6), floored at half a cell.
inline Bandwidth scott_bandwidth(std::span<const align::ScreenPoint> points) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const double factor = std::pow(static_cast<double>(points.size()), -1.0 / 6.0);
  return {std::max(detail::sample_std(xs) * factor, 0.5 * align::screen_width_px / heatmap_cells),
          std::max(detail::sample_std(ys) * factor, 0.5 * align::screen_height_px / heatmap_cells)};
}

inline HeatmapGrid kde_heatmap(std::span<const align::ScreenPoint> points, ingest::EventKind kind,
                               std::optional<Bandwidth> bandwidth = std::nullopt) {
  if (points.empty()) fail(ErrorCode::empty_points, "no points for the density estimate");
  HeatmapGrid grid;
  grid.event_kind = kind;
  grid.bandwidth = bandwidth ? *bandwidth : scott_bandwidth(points);
  if (!(grid.bandwidth.x > 0.0 && grid.bandwidth.y > 0.0)) fail(ErrorCode::bad_parameter, "bandwidth must be positive");

  // separable kernel: per-point 1-D weights on each axis, then an outer product
  const double hx = grid.bandwidth.x, hy = grid.bandwidth.y;
  const double norm = 1.0 / (2.0 * std::numbers::pi * hx * hy * static_cast<double>(points.size()));
  std::vector<double> kx(heatmap_cells), ky(heatmap_cells);
  grid.density.assign(heatmap_cells, std::vector<double>(heatmap_cells, 0.0));
  for (const auto& p : points) {
    for (std::size_t i = 0; i < heatmap_cells; ++i) {
      const double dx = (grid.cell_center_x(i) - p.x) / hx;
      const double dy = (grid.cell_center_y(i) - p.y) / hy;
      kx[i] = std::exp(-0.5 * dx * dx);
      ky[i] = std::exp(-0.5 * dy * dy);
    }
    for (std::size_t r = 0; r < heatmap_cells; ++r)
      for (std::size_t c = 0; c < heatmap_cells; ++c) grid.density[r][c] += ky[r] * kx[c];
  }
  for (auto& row : grid.density)
    for (auto& d : row) d *= norm;
  return grid;
}

}  // namespace meedav::analytics
