#pragma once

/**
 * @file wishart.hpp
 * @brief Quaternion central Wishart QW_m(n, Sigma): density, joint eigenvalue
 * density, and the distributions of the extreme eigenvalues.
 *
 * Convention: entries of the n x m Gaussian factor have four iid N(0, 1/4)
 * components, so for m = 1 and Sigma = s the law of W is (s/4) chi^2_{4n}.
 *
 *   P(W < D)  = 2^{2mn} QG_m(2m-1)/QG_m(2n+2m-1) |D|^{2n}/|Sigma|^{2n} 1F1(2n; 2n+2m-1; -2 Sigma^{-1} D)
 *   P(W > D)  = etr(-2 Sigma^{-1} D) sum_{k=0}^{mN} sum'_{kappa |- k} C_kappa(2 Sigma^{-1} D)/k!,  N = 2n-2m+1,
 *
 * where sum' keeps partitions with at most m parts and k_1 <= N. Matrix
 * arguments enter through the spectrum of T^{-H} D T^{-1}, Sigma = T^H T.
 */

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qzonal/errors.hpp"
#include "qzonal/hypergeom.hpp"
#include "qzonal/partitions.hpp"
#include "qzonal/precision.hpp"
#include "qzonal/qalg.hpp"
#include "qzonal/quaternion.hpp"
#include "qzonal/table_cache.hpp"
#include "qzonal/zonal.hpp"

namespace qzonal {

struct WishartParams {
  int m = 1;
  int n = 1;
  QMatrix sigma = QMatrix::identity(1);

  static WishartParams isotropic(int m, int n, double sigma2 = 1.0) {
    if (!(sigma2 > 0.0)) throw DomainError("WishartParams: sigma2 must be positive");
    return {m, n, QMatrix::identity(static_cast<std::size_t>(std::max(m, 0))) * sigma2};
  }

  /// Throws unless 1 <= m <= n and sigma is m x m Hermitian positive definite.
  void validate() const {
    if (m < 1) throw std::invalid_argument("WishartParams: m < 1");
    if (n < m) throw std::invalid_argument("WishartParams: n < m");
    if (sigma.rows() != static_cast<std::size_t>(m) || sigma.cols() != static_cast<std::size_t>(m))
      throw std::invalid_argument("WishartParams: sigma is not m x m");
    if (!is_hermitian(sigma, 1e-10 * frobenius_norm(sigma))) throw DomainError("WishartParams: sigma not Hermitian");
    (void)cholesky(sigma);
  }
};

struct EigDensityParams {
  int m = 1;
  int n = 1;
  double sigma2 = 1.0;
};

/// Exponential rate in the isotropic joint eigenvalue density: `derived` is
/// 2/sigma^2, consistent with the Wishart density; `printed` is 1/(2 sigma^2).
enum class EigRate { derived, printed };

namespace detail {

inline void require_hermitian(const QMatrix& a, const char* who) {
  if (!a.square() || !is_hermitian(a, 1e-10 * std::max(1.0, frobenius_norm(a))))
    throw DomainError(std::string(who) + ": matrix is not Hermitian");
}

/// Spectrum of Sigma^{-1} D, which must be positive.
inline std::vector<double> relative_spectrum(const QMatrix& delta, const WishartParams& p, const char* who) {
  p.validate();
  if (delta.rows() != static_cast<std::size_t>(p.m)) throw std::invalid_argument(std::string(who) + ": size mismatch");
  require_hermitian(delta, who);
  std::vector<double> d = relative_eigenvalues(p.sigma, delta).values;
  for (double v : d)
    if (!(v > 0.0)) throw DomainError(std::string(who) + ": matrix is not positive definite");
  return d;
}

/// log of 2^{2mn} QG_m(2m-1)/QG_m(2n+2m-1) prod d_i^{2n}.
inline double log_prob_less_prefactor(int m, int n, const std::vector<double>& d) {
  double s = 2.0 * m * n * std::numbers::ln2 + log_qgamma(m, 2.0 * m - 1.0) - log_qgamma(m, 2.0 * n + 2.0 * m - 1.0);
  for (double v : d) s += 2.0 * n * std::log(v);
  return s;
}

inline HypergeomResult prob_less_from_spectrum(const std::vector<double>& d, int m, int n,
                                               const TruncationPolicy& policy) {
  std::vector<double> z;
  for (double v : d) z.push_back(-2.0 * v);
  HypergeomResult f = pfq({2.0 * n}, {2.0 * n + 2.0 * m - 1.0}, z, policy);
  f.value *= std::exp(log_prob_less_prefactor(m, n, d));
  return f;
}

/// Degree-k pieces of the finite sum in P(W > D): sum' C_kappa(z)/k! per k, in Real.
template <class Real>
std::vector<Real> greater_layers(const std::vector<double>& z, int m, int n) {
  const int cap = 2 * n - 2 * m + 1;
  std::vector<Real> zr(z.begin(), z.end());
  std::vector<Real> out;
  Real fact{1};
  for (int k = 0; k <= m * cap; ++k) {
    if (k > 0) fact *= k;
    const auto table = table_cache().get(k, m);
    const auto coeffs = table_cache().coeffs<Real>(k, m);
    const std::vector<Real> c = eval_all_zonal<Real>(*table, zr, *coeffs);
    CompensatedSum<Real> layer;
    for (std::size_t i = 0; i < table->size(); ++i) {
      const Partition& kappa = table->partitions()[i];
      if (kappa.length() <= static_cast<std::size_t>(m) && kappa[0] <= cap) layer.add(c[i]);
    }
    out.push_back(layer.value() / fact);
  }
  return out;
}

}  // namespace detail

/// log density of W ~ QW_m(n, Sigma) with respect to the Lebesgue measure on
/// Hermitian quaternion matrices.
inline double wishart_logpdf(const QMatrix& w, const WishartParams& p) {
  p.validate();
  if (w.rows() != static_cast<std::size_t>(p.m)) throw std::invalid_argument("wishart_logpdf: size mismatch");
  detail::require_hermitian(w, "wishart_logpdf");
  const Spectrum sw = hermitian_eigenvalues(w);
  for (double v : sw.values)
    if (!(v > 0.0)) throw DomainError("wishart_logpdf: W is not positive definite");
  const QMatrix t = cholesky(p.sigma);
  double log_det_sigma = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) log_det_sigma += 2.0 * std::log(t(i, i).w);
  const QMatrix tinv = upper_triangular_inverse(t);
  const double tr = retr(conj_transpose(tinv) * w * tinv);
  double log_det_w = 0.0;
  for (double v : sw.values) log_det_w += std::log(v);
  const int m = p.m, n = p.n;
  return 2.0 * m * n * std::numbers::ln2 - log_qgamma(m, 2.0 * n) - 2.0 * n * log_det_sigma - 2.0 * tr +
         (2.0 * n - 2.0 * m + 1.0) * log_det_w;
}

/// log joint density of the ordered eigenvalues of QW_m(n, sigma2 I).
inline double joint_eig_logpdf(const std::vector<double>& lams, const EigDensityParams& p,
                               EigRate rate = EigRate::derived) {
  const int m = p.m, n = p.n;
  if (m < 1 || n < m) throw std::invalid_argument("joint_eig_logpdf: need 1 <= m <= n");
  if (!(p.sigma2 > 0.0)) throw DomainError("joint_eig_logpdf: sigma2 must be positive");
  if (lams.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("joint_eig_logpdf: expected m values");
  for (std::size_t i = 0; i < lams.size(); ++i) {
    if (!(lams[i] > 0.0)) throw DomainError("joint_eig_logpdf: eigenvalues must be positive");
    if (i > 0 && !(lams[i] < lams[i - 1])) throw DomainError("joint_eig_logpdf: eigenvalues must strictly descend");
  }
  const double r = rate == EigRate::derived ? 2.0 / p.sigma2 : 1.0 / (2.0 * p.sigma2);
  double s = 2.0 * m * n * std::numbers::ln2 + (2.0 * m * m - 2.0 * m) * std::log(std::numbers::pi) -
             log_qgamma(m, 2.0 * m) - log_qgamma(m, 2.0 * n) - 2.0 * n * m * std::log(p.sigma2);
  double sum = 0.0;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    s += (2.0 * n - 2.0 * m + 1.0) * std::log(lams[i]);
    for (std::size_t j = i + 1; j < lams.size(); ++j) s += 4.0 * std::log(lams[i] - lams[j]);
    sum += lams[i];
  }
  return s - r * sum;
}

/// P(W < delta) in the Loewner order.
inline HypergeomResult prob_less(const QMatrix& delta, const WishartParams& p, const TruncationPolicy& policy = {}) {
  const auto d = detail::relative_spectrum(delta, p, "prob_less");
  return detail::prob_less_from_spectrum(d, p.m, p.n, policy);
}

/// P(W > delta) in the Loewner order; a finite sum.
inline double prob_greater(const QMatrix& delta, const WishartParams& p) {
  const auto d = detail::relative_spectrum(delta, p, "prob_greater");
  std::vector<double> z;
  double tr = 0.0;
  for (double v : d) {
    z.push_back(2.0 * v);
    tr += 2.0 * v;
  }
  CompensatedSum<double> s;
  for (double l : detail::greater_layers<double>(z, p.m, p.n)) s.add(l);
  return s.value() * std::exp(-tr);
}

/// P(lambda_max(W) < x).
inline HypergeomResult lambda_max_cdf(double x, const WishartParams& p, const TruncationPolicy& policy = {}) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("lambda_max_cdf: x must be nonnegative");
  p.validate();
  if (x == 0.0) return {0.0, 0, true, 0.0};
  return prob_less(QMatrix::identity(p.m) * x, p, policy);
}

/// P(lambda_min(W) > x).
inline double lambda_min_sf(double x, const WishartParams& p) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("lambda_min_sf: x must be nonnegative");
  p.validate();
  if (x == 0.0) return 1.0;
  return prob_greater(QMatrix::identity(p.m) * x, p);
}

/// Density of lambda_max(W): term-wise derivative of the truncated CDF series.
/// CDF(x) = A x^{2mn} sum_k c_k x^k, so the density is A x^{2mn-1} sum_k (2mn+k) c_k x^k.
inline HypergeomResult lambda_max_pdf(double x, const WishartParams& p, const TruncationPolicy& policy = {}) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("lambda_max_pdf: x must be nonnegative");
  p.validate();
  if (x == 0.0) return {0.0, 0, true, 0.0};
  const auto d = detail::relative_spectrum(QMatrix::identity(p.m) * x, p, "lambda_max_pdf");
  std::vector<double> z;
  for (double v : d) z.push_back(-2.0 * v);
  const int base = 2 * p.m * p.n;
  HypergeomResult f = pfq_weighted({2.0 * p.n}, {2.0 * p.n + 2.0 * p.m - 1.0}, z,
                                   [base](int k) { return static_cast<double>(base + k); }, policy);
  f.value *= std::exp(detail::log_prob_less_prefactor(p.m, p.n, d)) / x;
  return f;
}

/// Density of lambda_min(W): minus the derivative of the survival function,
/// e^{-2xs} [2s sum_k H_k - sum_k k H_k / x] with s = tr Sigma^{-1} and
/// H_k the degree-k part of the finite sum at 2x Sigma^{-1}.
inline double lambda_min_pdf(double x, const WishartParams& p) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("lambda_min_pdf: x must be nonnegative");
  p.validate();
  if (x == 0.0) return 0.0;
  const auto d = detail::relative_spectrum(QMatrix::identity(p.m) * x, p, "lambda_min_pdf");
  std::vector<double> z;
  double tr = 0.0;
  for (double v : d) {
    z.push_back(2.0 * v);
    tr += 2.0 * v;
  }
  // 2s - k/x = (tr z - k)/x; formed in Real so the cancellation between degrees is resolved
  const auto e = with_adaptive_precision([&]<class Real>() {
    const std::vector<Real> h = detail::greater_layers<Real>(z, p.m, p.n);
    Real ztr{0};
    for (double v : z) ztr += Real(v);
    CompensatedSum<Real> acc;
    double mag = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      acc.add(h[k] * (ztr - Real(static_cast<double>(k))) / Real(x));
      mag += std::abs(to_double(h[k])) * (tr + static_cast<double>(k)) / x;
    }
    Estimate<Real> out;
    out.value = acc.value();
    out.magnitude = mag;
    out.degree_used = static_cast<int>(h.size()) - 1;
    return out;
  });
  return e.value * std::exp(-tr);
}

}  // namespace qzonal
