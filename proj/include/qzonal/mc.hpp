#pragma once

/**
 * @file mc.hpp
 * @brief Samplers for quaternion Gaussian, Wishart and Haar-unitary matrices,
 * empirical CDFs, and Monte Carlo checks of the group-integral identities.
 *
 * Random numbers: std::mt19937_64 seeded through std::seed_seq from the
 * (seed, stream_id) pair, uniforms from the top 53 bits, Gaussians by the
 * Box-Muller transform. Engine, seeding and the uniform mapping are fixed by
 * the standard; the Gaussian step goes through libm, so draws are bit-exact
 * per platform.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qzonal/errors.hpp"
#include "qzonal/hypergeom.hpp"
#include "qzonal/qalg.hpp"
#include "qzonal/quaternion.hpp"
#include "qzonal/table_cache.hpp"
#include "qzonal/wishart.hpp"
#include "qzonal/zonal.hpp"

namespace qzonal {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) : seed_{seed}, stream_id_{stream_id} {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double th = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// rows x cols matrix of quaternion normals: four iid N(0, 1/4) components per entry.
inline QMatrix sample_qnormal(std::size_t rows, std::size_t cols, RngStream& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_qnormal: empty shape");
  QMatrix x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double w = 0.5 * rng.normal(), a = 0.5 * rng.normal(), b = 0.5 * rng.normal(), c = 0.5 * rng.normal();
      x(i, j) = Quaternion{w, a, b, c};
    }
  return x;
}

/// W = Y^H Y with Y = X T, X ~ n x m quaternion normal and Sigma = T^H T.
inline QMatrix sample_wishart(const WishartParams& p, RngStream& rng) {
  p.validate();
  const QMatrix y = sample_qnormal(p.n, p.m, rng) * cholesky(p.sigma);
  QMatrix w = conj_transpose(y) * y;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    w(i, i) = Quaternion{w(i, i).w};
    for (std::size_t j = i + 1; j < w.cols(); ++j) w(j, i) = w(i, j).conj();
  }
  return w;
}

/// Haar-distributed quaternionic unitary matrix: Q of the QR factorization of
/// a Gaussian matrix, with R's diagonal positive real.
inline QMatrix sample_haar_unitary(std::size_t m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("sample_haar_unitary: m < 1");
  return qr_unitary(sample_qnormal(m, m, rng));
}

struct McEstimate {
  double mc_mean = 0.0;
  double analytic = 0.0;
  double stderr_ = 0.0;

  /// |mc_mean - analytic| <= k * stderr_ + rel_slack * |analytic|. The slack
  /// absorbs rounding when the integrand is constant and stderr_ is ~0.
  bool within(double k, double rel_slack = 1e-12) const {
    return std::abs(mc_mean - analytic) <= k * stderr_ + rel_slack * std::abs(analytic);
  }

  /// Deviation in units of the standard error (slack included).
  double z_score(double rel_slack = 1e-12) const {
    const double scale = stderr_ + rel_slack * std::abs(analytic) / 3.0;
    return scale > 0.0 ? std::abs(mc_mean - analytic) / scale : 0.0;
  }
};

namespace detail {

/// Welford running mean and variance.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_of_mean() const { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline QMatrix scale_columns(QMatrix a, const std::vector<double>& s) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = a(i, j) * s[j];
  return a;
}

}  // namespace detail

/// Monte Carlo mean of C_kappa(X1 H X2 H^H) over Haar H against
/// C_kappa(X1) C_kappa(X2) / C_kappa(I_m), with X1 = diag(eigs_x), X2 = diag(eigs_y).
/// One of the two diagonals must be nonnegative so the product has a
/// Hermitian similarity representative.
inline McEstimate mc_splitting_check(const std::vector<double>& eigs_x, const std::vector<double>& eigs_y,
                                     const Partition& kappa, int samples, RngStream& rng) {
  const std::size_t m = eigs_x.size();
  if (m == 0 || eigs_y.size() != m) throw std::invalid_argument("mc_splitting_check: lengths differ or are zero");
  if (samples < 1000) throw std::invalid_argument("mc_splitting_check: need at least 1000 samples");
  const bool y_nonneg = std::all_of(eigs_y.begin(), eigs_y.end(), [](double v) { return v >= 0.0; });
  const bool x_nonneg = std::all_of(eigs_x.begin(), eigs_x.end(), [](double v) { return v >= 0.0; });
  if (!y_nonneg && !x_nonneg) throw DomainError("mc_splitting_check: one diagonal must be nonnegative");
  const auto table = table_cache().get(kappa.weight(), static_cast<int>(m));

  const std::vector<double>& inner = y_nonneg ? eigs_y : eigs_x;
  const std::vector<double>& outer = y_nonneg ? eigs_x : eigs_y;
  std::vector<double> root;
  for (double v : inner) root.push_back(std::sqrt(v));
  const QMatrix d_outer = QMatrix::diagonal(outer);

  detail::RunningStats stats;
  for (int s = 0; s < samples; ++s) {
    // eig(D_o H D_i H^H) = eig(G^H D_o G) with G = H D_i^{1/2}
    const QMatrix g = detail::scale_columns(sample_haar_unitary(m, rng), root);
    QMatrix a = conj_transpose(g) * d_outer * g;
    for (std::size_t i = 0; i < m; ++i) {
      a(i, i) = Quaternion{a(i, i).w};
      for (std::size_t j = i + 1; j < m; ++j) a(j, i) = a(i, j).conj();
    }
    stats.add(eval_zonal(*table, kappa, hermitian_eigenvalues(a).values));
  }
  const double cx = eval_zonal(*table, kappa, eigs_x);
  const double cy = eval_zonal(*table, kappa, eigs_y);
  const double ci = zonal_at_identity(*table, kappa, static_cast<int>(m)).convert_to<double>();
  return {stats.mean(), cx * cy / ci, stats.stderr_of_mean()};
}

/// Monte Carlo mean of exp(4 Retr(X H1)) over Haar H in the n x n unitary
/// group (H1 its first m columns) against 0F1(2n; 4 X X^H).
inline McEstimate mc_0f1_check(const QMatrix& x, int samples, RngStream& rng, const TruncationPolicy& policy = {}) {
  const std::size_t m = x.rows(), n = x.cols();
  if (m < 1 || m > n) throw std::invalid_argument("mc_0f1_check: need 1 <= m <= n");
  if (samples < 1) throw std::invalid_argument("mc_0f1_check: samples < 1");
  detail::RunningStats stats;
  for (int s = 0; s < samples; ++s) {
    const QMatrix h1 = sample_haar_unitary(n, rng).left_columns(m);
    stats.add(std::exp(4.0 * retr(x * h1)));
  }
  QMatrix g = x * conj_transpose(x) * 4.0;
  std::vector<double> eigs = hermitian_eigenvalues(g).values;
  const double analytic = pfq({}, {2.0 * static_cast<double>(n)}, eigs, policy).value;
  return {stats.mean(), analytic, stats.stderr_of_mean()};
}

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples) : sorted_{std::move(samples)} {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: no samples");
    std::sort(sorted_.begin(), sorted_.end());
  }

  const std::vector<double>& sorted_samples() const { return sorted_; }
  std::size_t n() const { return sorted_.size(); }

  /// Fraction of samples <= x.
  double operator()(double x) const {
    return static_cast<double>(std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin()) /
           static_cast<double>(sorted_.size());
  }

 private:
  std::vector<double> sorted_;
};

inline EmpiricalCdf empirical_cdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

/// sup_x |F_n(x) - F(x)|, checking both sides of every jump of F_n. The left
/// limit of F at a sample point is taken at the next smaller double.
inline double ks_distance(const EmpiricalCdf& e, const std::function<double(double)>& cdf) {
  const auto& s = e.sorted_samples();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t lo = 0; lo < s.size();) {
    std::size_t hi = lo;
    while (hi < s.size() && s[hi] == s[lo]) ++hi;
    const double v = s[lo];
    d = std::max(d, std::abs(static_cast<double>(hi) / n - cdf(v)));
    d = std::max(d, std::abs(static_cast<double>(lo) / n - cdf(std::nextafter(v, -std::numeric_limits<double>::infinity()))));
    lo = hi;
  }
  return d;
}

}  // namespace qzonal
