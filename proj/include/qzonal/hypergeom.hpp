#pragma once

/**
 * @file hypergeom.hpp
 * @brief Truncated hypergeometric functions of one and two quaternion
 * Hermitian matrix arguments, given through their eigenvalues:
 *
 *   pFq(a; b; X)      = sum_k sum_{kappa |- k} [prod (a_i)_kappa / prod (b_j)_kappa] C_kappa(X) / k!
 *   pFq^(2)(a; b; X, Y) = same with C_kappa(X) C_kappa(Y) / C_kappa(I_m) in place of C_kappa(X).
 *
 * Each degree-k layer is summed over partitions with at most m parts. The
 * running sum stops once two consecutive layers fall below layer_tol times
 * the partial sum, or at max_degree. Layers are evaluated at eigenvalues
 * scaled into [-1, 1] with the scale folded into the coefficient, which keeps
 * double evaluation in range for degrees in the hundreds; when the double
 * pass shows heavy cancellation the same sum is redone in MPFR (see
 * precision.hpp).
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qzonal/errors.hpp"
#include "qzonal/partitions.hpp"
#include "qzonal/precision.hpp"
#include "qzonal/table_cache.hpp"
#include "qzonal/zonal.hpp"

namespace qzonal {

struct TruncationPolicy {
  int max_degree = 60;
  double layer_tol = 1e-12;
  bool hard_fail_on_cap = true;

  void validate() const {
    if (max_degree < 0) throw std::invalid_argument("TruncationPolicy: max_degree < 0");
    if (!(layer_tol > 0.0)) throw std::invalid_argument("TruncationPolicy: layer_tol must be positive");
  }
};

template <class Real>
struct BasicHypergeomResult {
  Real value{0};
  int degree_used = 0;
  bool converged = true;
  double last_layer_magnitude = 0.0;
};

using HypergeomResult = BasicHypergeomResult<double>;

/// Neumaier's compensated sum.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& x) {
    const Real t = sum_ + x;
    if (abs_of(sum_) >= abs_of(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  static Real abs_of(const Real& x) {
    using std::abs;
    return abs(x);
  }
  Real sum_{0};
  Real comp_{0};
};

namespace detail {

/// Degree beyond which every term of the series vanishes, if some upper
/// parameter is a nonpositive integer -N: (-N)_kappa = 0 once k_1 > N, so only
/// partitions with at most m parts and k_1 <= N survive.
inline std::optional<int> terminating_degree(const std::vector<double>& a, std::size_t m) {
  std::optional<int> best;
  for (double ai : a) {
    if (ai <= 0.0 && ai == std::floor(ai) && ai > -1e9) {
      const int deg = static_cast<int>(-ai) * static_cast<int>(m);
      if (!best || deg < *best) best = deg;
    }
  }
  return best;
}

inline void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string("pfq: non-finite value in ") + what);
}

inline double max_abs(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

/// Everything a series evaluation needs besides the working type.
struct SeriesSpec {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> x;
  std::vector<double> y;  // empty for the one-matrix series
  /// Multiplies the degree-k layer before summation (1 for plain pFq).
  std::function<double(int)> weight;
};

/// prod (a_i)_kappa / prod (b_j)_kappa * s^k / k!, in double through logarithms
/// so that neither the Pochhammer products nor k! overflow.
inline double coefficient_double(const SeriesSpec& s, const Partition& kappa, int k, double log_scale) {
  double logc = k * log_scale - std::lgamma(k + 1.0);
  bool negative = false;
  auto accumulate = [&](double p, int sign) -> bool {
    for (std::size_t j = 0; j < kappa.length(); ++j)
      for (int t = 0; t < kappa[j]; ++t) {
        const double f = p - 2.0 * static_cast<double>(j) + t;
        if (f == 0.0) return false;
        logc += sign * std::log(std::abs(f));
        if (f < 0) negative = !negative;
      }
    return true;
  };
  for (double bi : s.b)
    if (!accumulate(bi, -1))
      throw DomainError("pfq: lower parameter " + std::to_string(bi) + " gives a zero Pochhammer symbol at kappa = " +
                        kappa.to_string());
  for (double ai : s.a)
    if (!accumulate(ai, +1)) return 0.0;
  const double c = std::exp(logc);
  return negative ? -c : c;
}

template <class Real>
Real coefficient(const SeriesSpec& s, const Partition& kappa, int k, const Real& scale_pow_over_fact) {
  Real den{1};
  for (double bi : s.b) den *= gen_pochhammer<Real>(Real(bi), kappa);
  if (den == 0)
    throw DomainError("pfq: lower parameter gives a zero Pochhammer symbol at kappa = " + kappa.to_string());
  Real num{1};
  for (double ai : s.a) num *= gen_pochhammer<Real>(Real(ai), kappa);
  (void)k;
  return num / den * scale_pow_over_fact;
}

/// One pass of the truncated series in working type Real.
template <class Real>
Estimate<Real> sum_series(const SeriesSpec& s, const TruncationPolicy& policy, std::optional<int> term_deg) {
  const std::size_t m = s.x.size();
  const bool two = !s.y.empty();
  const double sx = max_abs(s.x);
  const double sy = two ? max_abs(s.y) : 1.0;
  const double scale = sx * sy;

  std::vector<Real> xs, ys, ones(m, Real{1});
  std::vector<double> xabs, yabs, ones_d(m, 1.0);
  for (double v : s.x) {
    xs.push_back(Real(v) / Real(sx));
    xabs.push_back(std::abs(v) / sx);
  }
  if (two)
    for (double v : s.y) {
      ys.push_back(Real(v) / Real(sy));
      yabs.push_back(std::abs(v) / sy);
    }

  const int cap = term_deg ? std::min(*term_deg, policy.max_degree) : policy.max_degree;
  CompensatedSum<Real> total;
  Estimate<Real> out;
  Real pow_over_fact{1};
  int small = 0;
  out.converged = false;
  for (int k = 0; k <= cap; ++k) {
    if (k > 0) pow_over_fact = pow_over_fact * Real(scale) / Real(k);
    const auto table = table_cache().get(k, static_cast<int>(m));
    const auto coeffs = table_cache().coeffs<Real>(k, static_cast<int>(m));
    const std::vector<Real> cx = eval_all_zonal<Real>(*table, xs, *coeffs);
    const std::vector<double> cx_abs = eval_all_zonal<double>(*table, xabs);
    std::vector<Real> cy, cid;
    std::vector<double> cy_abs, cid_d;
    if (two) {
      cy = eval_all_zonal<Real>(*table, ys, *coeffs);
      cid = eval_all_zonal<Real>(*table, ones, *coeffs);
      cy_abs = eval_all_zonal<double>(*table, yabs);
      cid_d = eval_all_zonal<double>(*table, ones_d);
    }
    const double w = s.weight ? s.weight(k) : 1.0;
    CompensatedSum<Real> layer;
    double layer_abs = 0.0;
    for (std::size_t i = 0; i < table->size(); ++i) {
      const Partition& kappa = table->partitions()[i];
      if (kappa.length() > m) continue;
      Real c;
      double c_abs;
      if constexpr (std::is_same_v<Real, double>) {
        c = coefficient_double(s, kappa, k, std::log(scale));
        c_abs = std::abs(c);
      } else {
        c = coefficient<Real>(s, kappa, k, pow_over_fact);
        c_abs = std::abs(to_double(c));
      }
      if (c == 0) continue;
      Real term = c * cx[i];
      double term_abs = c_abs * cx_abs[i];
      if (two) {
        term = term * cy[i] / cid[i];
        term_abs *= cy_abs[i] / cid_d[i];
      }
      layer.add(term);
      layer_abs += term_abs;
    }
    const Real lv = layer.value() * Real(w);
    total.add(lv);
    out.magnitude += layer_abs * std::abs(w);
    out.degree_used = k;
    out.last_layer = std::abs(to_double(lv));
    using std::abs;
    if (abs(lv) < Real(policy.layer_tol) * abs(total.value()))
      ++small;
    else
      small = 0;
    if (small >= 2 || (term_deg && k == *term_deg)) {
      out.converged = true;
      break;
    }
  }
  out.value = total.value();
  return out;
}

inline void check_domain(const SeriesSpec& s, std::optional<int> term_deg) {
  const std::size_t p = s.a.size(), q = s.b.size();
  if (term_deg) return;
  if (p > q + 1) throw DivergenceError("pfq: p > q+1 and the series does not terminate");
  if (p == q + 1) {
    const double r = max_abs(s.x) * (s.y.empty() ? 1.0 : max_abs(s.y));
    if (r >= 1.0) throw DivergenceError("pfq: p = q+1 requires spectral radius < 1");
  }
}

inline HypergeomResult run(SeriesSpec s, const TruncationPolicy& policy) {
  policy.validate();
  if (s.x.empty()) throw std::invalid_argument("pfq: empty eigenvalue list");
  if (!s.y.empty() && s.y.size() != s.x.size()) throw std::invalid_argument("pfq: eigenvalue lists differ in length");
  check_finite(s.a, "a");
  check_finite(s.b, "b");
  check_finite(s.x, "eigs");
  check_finite(s.y, "eigs");
  const auto term_deg = terminating_degree(s.a, s.x.size());
  check_domain(s, term_deg);

  // only the constant term survives at a zero argument
  if (max_abs(s.x) == 0.0 || (!s.y.empty() && max_abs(s.y) == 0.0))
    return {s.weight ? s.weight(0) : 1.0, 0, true, 0.0};

  const Estimate<double> e =
      with_adaptive_precision([&]<class Real>() { return sum_series<Real>(s, policy, term_deg); });
  if (!e.converged && policy.hard_fail_on_cap)
    throw TruncationError("pfq: no convergence within " + std::to_string(policy.max_degree) +
                          " degrees (last layer " + std::to_string(e.last_layer) + ")");
  return {e.value, e.degree_used, e.converged, e.last_layer};
}

}  // namespace detail

/// One-matrix series pFq(a; b; X) at the eigenvalues of X.
inline HypergeomResult pfq(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& eigs,
                           const TruncationPolicy& policy = {}) {
  return detail::run({a, b, eigs, {}, {}}, policy);
}

/// sum_k weight(k) * (degree-k layer of pFq); used for term-wise derivatives.
inline HypergeomResult pfq_weighted(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& eigs, std::function<double(int)> weight,
                                    const TruncationPolicy& policy = {}) {
  return detail::run({a, b, eigs, {}, std::move(weight)}, policy);
}

/// The degree-k layer of pFq alone, in double.
inline double pfq_layer(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& eigs,
                        int k) {
  TruncationPolicy p{k, 1e-300, false};
  return detail::run({a, b, eigs, {}, [k](int d) { return d == k ? 1.0 : 0.0; }}, p).value;
}

/// Two-matrix series pFq^(2)(a; b; X, Y).
inline HypergeomResult pfq_two(const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<double>& eigs_x, const std::vector<double>& eigs_y,
                               const TruncationPolicy& policy = {}) {
  if (eigs_x.size() != eigs_y.size()) throw std::invalid_argument("pfq_two: eigenvalue lists differ in length");
  return detail::run({a, b, eigs_x, eigs_y, {}}, policy);
}

/// prod (1 - z_i)^(-a); the closed form of 1F0(a; Z).
inline double one_f_zero_closed(double a, const std::vector<double>& eigs) {
  if (detail::max_abs(eigs) >= 1.0) throw DomainError("one_f_zero_closed: spectral radius >= 1");
  double s = 0.0;
  for (double z : eigs) s += std::log1p(-z);
  return std::exp(-a * s);
}

/// exp(tr X) = 0F0(X).
inline double etr(const std::vector<double>& eigs) {
  double s = 0.0;
  for (double z : eigs) s += z;
  return std::exp(s);
}

}  // namespace qzonal
