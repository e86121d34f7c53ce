#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "meedav/error.hpp"

namespace meedav::denoise {

/// Rows are channels (or components), columns are samples.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Whitening {
  Matrix whitened;   // transform * (X - mean)
  Matrix transform;  // symmetric inverse square root of the covariance
  Matrix inverse;    // symmetric square root of the covariance
  Vector mean;
};

/// Centers each row and applies the symmetric (ZCA) whitening transform, so
/// the population covariance of the result is the identity.
inline Whitening whiten(const Matrix& x) {
  const auto channels = x.rows(), samples = x.cols();
  if (channels < 1 || samples <= channels)
    fail(ErrorCode::insufficient_data, "whitening needs more samples than channels");

  Whitening w;
  w.mean = x.rowwise().mean();
  Matrix centered = x.colwise() - w.mean;
  const Matrix cov = centered * centered.transpose() / static_cast<double>(samples);
  for (Eigen::Index c = 0; c < channels; ++c)
    if (!(cov(c, c) > 0.0)) fail(ErrorCode::degenerate_channel, "channel " + std::to_string(c) + " has zero variance");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector d = eig.eigenvalues();
  if (!(d.minCoeff() > 1e-12 * d.maxCoeff()))
    fail(ErrorCode::degenerate_channel, "channels are linearly dependent");
  const Matrix& e = eig.eigenvectors();
  w.transform = e * d.cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose();
  w.inverse = e * d.cwiseSqrt().asDiagonal() * e.transpose();
  w.whitened = w.transform * centered;
  return w;
}

/// W <- (W W^T)^(-1/2) W
inline Matrix symmetric_decorrelation(const Matrix& w) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(w * w.transpose());
  const Matrix& e = eig.eigenvectors();
  return e * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose() * w;
}

struct IcaOptions {
  int max_iter = 200;
  double tol = 1e-4;
  std::uint64_t seed = 42;
};

struct IcaResult {
  Matrix unmixing;  // W, acting on whitened data; rows orthonormal
  Matrix sources;   // W * Xw
  bool converged = false;
  int iterations = 0;
};

/// Parallel FastICA with the log-cosh contrast (g = tanh). Stops once every
/// |diag(W_new W_old^T)| exceeds 1 - tol; otherwise returns the last iterate
/// with converged = false.
inline IcaResult fast_ica(const Matrix& whitened, const IcaOptions& opts = {}) {
  const auto c = whitened.rows();
  const auto t = static_cast<double>(whitened.cols());
  IcaResult r;
  if (c == 1) {
    r.unmixing = Matrix::Identity(1, 1);
    r.sources = whitened;
    r.converged = true;
    return r;
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Matrix w(c, c);
  for (Eigen::Index i = 0; i < c; ++i)
    for (Eigen::Index j = 0; j < c; ++j) w(i, j) = normal(rng);
  w = symmetric_decorrelation(w);

  const Matrix xt = whitened.transpose();
  for (r.iterations = 1; r.iterations <= opts.max_iter; ++r.iterations) {
    const Matrix g = (w * whitened).array().tanh().matrix();
    const Vector g_prime_mean = (1.0 - g.array().square()).rowwise().mean();
    Matrix next = symmetric_decorrelation((g * xt) / t - g_prime_mean.asDiagonal() * w);
    const double lim = ((next * w.transpose()).diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff();
    w = std::move(next);
    if (lim < opts.tol) {
      r.converged = true;
      break;
    }
  }
  r.iterations = std::min(r.iterations, opts.max_iter);
  r.unmixing = w;
  r.sources = w * whitened;
  return r;
}

/// Excess kurtosis with the population estimator: m4 / m2^2 - 3.
inline double component_kurtosis(std::span<const double> s) {
  if (s.size() < 4) fail(ErrorCode::insufficient_data, "kurtosis needs at least 4 samples");
  const double n = static_cast<double>(s.size());
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : s) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) fail(ErrorCode::degenerate_component, "component has zero variance");
  return m4 / (m2 * m2) - 3.0;
}

inline double peak_to_peak(std::span<const double> s) {
  if (s.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return *hi - *lo;
}

/// Percentile by linear interpolation between order statistics
/// (rank p/100 * (n-1)).
inline double percentile_linear(std::vector<double> values, double pct) {
  if (values.empty()) fail(ErrorCode::empty_input, "percentile of nothing");
  std::sort(values.begin(), values.end());
  const double rank = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (values[hi] - values[lo]) * (rank - static_cast<double>(lo));
}

struct ArtifactCriteria {
  double kurtosis_sigma_factor = 3.0;
  double p2p_percentile = 95.0;

  void validate() const {
    if (!(kurtosis_sigma_factor > 0.0)) fail(ErrorCode::bad_parameter, "kurtosis sigma factor must be positive");
    if (!(p2p_percentile > 0.0 && p2p_percentile <= 100.0))
      fail(ErrorCode::bad_parameter, "peak-to-peak percentile must be in (0, 100]");
  }
};

/// Rejection rule on per-component statistics. Component i is rejected when
/// |k_i - mean(k)| > factor * std(k) (population std, skipped when it is 0)
/// or when p2p_i exceeds the given percentile of all p2p values. At least one
/// component is always kept: if everything was rejected, the rejected
/// component with the smallest p2p is restored.
inline std::vector<std::size_t> detect_artifacts(std::span<const double> kurtoses, std::span<const double> p2ps,
                                                 const ArtifactCriteria& criteria) {
  criteria.validate();
  if (kurtoses.size() != p2ps.size()) fail(ErrorCode::length_mismatch, "statistics differ in length");
  const std::size_t n = kurtoses.size();
  if (n < 2) return {};

  double mean = 0.0;
  for (double k : kurtoses) mean += k;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double k : kurtoses) var += (k - mean) * (k - mean);
  const double sd = std::sqrt(var / static_cast<double>(n));
  const double p2p_threshold = percentile_linear({p2ps.begin(), p2ps.end()}, criteria.p2p_percentile);

  std::vector<std::size_t> rejected;
  for (std::size_t i = 0; i < n; ++i) {
    const bool spiky = sd > 0.0 && std::abs(kurtoses[i] - mean) > criteria.kurtosis_sigma_factor * sd;
    const bool large = p2ps[i] > p2p_threshold;
    if (spiky || large) rejected.push_back(i);
  }
  if (rejected.size() == n) {
    auto keep = std::min_element(rejected.begin(), rejected.end(),
                                 [&](std::size_t a, std::size_t b) { return p2ps[a] < p2ps[b]; });
    rejected.erase(keep);
  }
  return rejected;
}

struct ComponentStats {
  std::vector<double> kurtosis;
  std::vector<double> p2p;
};

inline ComponentStats component_stats(const Matrix& sources) {
  ComponentStats st;
  std::vector<double> row(static_cast<std::size_t>(sources.cols()));
  for (Eigen::Index i = 0; i < sources.rows(); ++i) {
    for (Eigen::Index j = 0; j < sources.cols(); ++j) row[static_cast<std::size_t>(j)] = sources(i, j);
    st.kurtosis.push_back(component_kurtosis(row));
    st.p2p.push_back(peak_to_peak(row));
  }
  return st;
}

inline std::vector<std::size_t> detect_artifact_components(const Matrix& sources, const ArtifactCriteria& criteria) {
  if (sources.rows() < 2) return {};
  const auto st = component_stats(sources);
  return detect_artifacts(st.kurtosis, st.p2p, criteria);
}

struct DenoiseResult {
  Matrix mixing;    // A: maps sources back to centered channels
  Matrix unmixing;  // A^-1 = W * whitening transform, acting on centered channels
  Matrix sources;   // S
  std::vector<std::size_t> rejected;
  Matrix cleaned;   // A * S_hat + channel means
  Vector channel_means;
  ComponentStats stats;
  int iterations = 0;
  bool converged = false;

  /// S with the given rows zeroed.
  Matrix retained_sources(const std::vector<std::size_t>& drop) const {
    Matrix s = sources;
    for (auto i : drop) s.row(static_cast<Eigen::Index>(i)).setZero();
    return s;
  }
  Matrix retained_sources() const { return retained_sources(rejected); }

  /// A * S_hat + means for an arbitrary rejection set.
  Matrix reconstruct(const std::vector<std::size_t>& drop) const {
    return (mixing * retained_sources(drop)).colwise() + channel_means;
  }
};

/// whiten -> FastICA -> reject artifact components -> reconstruct.
inline DenoiseResult denoise_eeg(const Matrix& x, const ArtifactCriteria& criteria = {}, const IcaOptions& opts = {}) {
  criteria.validate();
  DenoiseResult r;
  if (x.rows() == 1) {
    if (x.cols() < 2) fail(ErrorCode::insufficient_data, "need at least 2 samples");
    r.channel_means = x.rowwise().mean();
    const Matrix centered = x.colwise() - r.channel_means;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(x.cols()));
    if (!(sd > 0.0)) fail(ErrorCode::degenerate_channel, "channel 0 has zero variance");
    r.mixing = Matrix::Constant(1, 1, sd);
    r.unmixing = Matrix::Constant(1, 1, 1.0 / sd);
    r.sources = centered / sd;
    r.cleaned = x;
    r.converged = true;
    return r;
  }

  const auto w = whiten(x);
  const auto ica = fast_ica(w.whitened, opts);
  r.unmixing = ica.unmixing * w.transform;
  r.mixing = w.inverse * ica.unmixing.transpose();
  r.sources = ica.sources;
  r.channel_means = w.mean;
  r.iterations = ica.iterations;
  r.converged = ica.converged;
  r.stats = component_stats(r.sources);
  r.rejected = detect_artifacts(r.stats.kurtosis, r.stats.p2p, criteria);
  r.cleaned = r.reconstruct(r.rejected);
  return r;
}

}  // namespace meedav::denoise
