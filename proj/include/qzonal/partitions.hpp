#pragma once

/**
 * @file partitions.hpp
 * @brief Integer partitions, their lexicographic order, and the partition
 * indexed special functions of the quaternion case: rho, generalized
 * Pochhammer symbols and the quaternion multivariate gamma function.
 */

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "qzonal/errors.hpp"

namespace qzonal {

using BigInt = boost::multiprecision::mpz_int;
/// Arbitrary precision rational in canonical form (GMP mpq).
using BigRational = boost::multiprecision::mpq_rational;

/// Weakly decreasing tuple of positive integers; trailing zeros are trimmed.
class Partition {
 public:
  Partition() = default;

  /// Throws std::invalid_argument unless `parts` is weakly decreasing and nonnegative.
  explicit Partition(std::vector<int> parts) : parts_{std::move(parts)} {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0) throw std::invalid_argument("Partition: negative part");
      if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("Partition: parts not descending");
    }
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  }

  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  /// Sorts an arbitrary nonnegative tuple into canonical form.
  static Partition canonical(std::vector<int> parts) {
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
  }

  const std::vector<int>& parts() const { return parts_; }
  /// Number of nonzero parts.
  std::size_t length() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  int weight() const {
    int k = 0;
    for (int p : parts_) k += p;
    return k;
  }
  /// i-th part (0-based), zero beyond the length.
  int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }

  bool operator==(const Partition&) const = default;
  /// Lexicographic order: the first unequal part decides.
  std::strong_ordering operator<=>(const Partition& o) const { return parts_ <=> o.parts_; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + std::to_string(parts_[i]);
    return s + ")";
  }

 private:
  std::vector<int> parts_;
};

/// Compares two partitions of the same weight; κ > λ when the first unequal
/// part of κ is larger.
inline std::strong_ordering lex_compare(const Partition& a, const Partition& b) {
  if (a.weight() != b.weight()) throw std::invalid_argument("lex_compare: partitions of different weights");
  return a <=> b;
}

/// All partitions of k into at most max_parts parts, strictly decreasing in lex order.
inline std::vector<Partition> partitions_of(int k, int max_parts) {
  if (k < 0) throw std::invalid_argument("partitions_of: negative weight");
  if (max_parts < 1) throw std::invalid_argument("partitions_of: max_parts < 1");
  std::vector<Partition> out;
  std::vector<int> cur;
  // depth-first with largest first part first yields decreasing lex order
  auto rec = [&](auto&& self, int remaining, int cap) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == max_parts) return;
    for (int p = std::min(remaining, cap); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, k, k);
  return out;
}

/// rho = sum_i k_i (k_i - 4 i), i counted from 1.
inline long rho(const Partition& kappa) {
  long r = 0;
  for (std::size_t i = 0; i < kappa.length(); ++i) {
    const long ki = kappa[i];
    r += ki * (ki - 4 * static_cast<long>(i + 1));
  }
  return r;
}

/// (a)_j = a (a+1) ... (a+j-1).
template <class T>
T rising_factorial(const T& a, int j) {
  T r{1};
  for (int t = 0; t < j; ++t) r *= a + T(t);
  return r;
}

/// (a)_kappa = prod_j (a - 2(j-1))_{k_j}.
template <class T>
T gen_pochhammer(const T& a, const Partition& kappa) {
  T r{1};
  for (std::size_t j = 0; j < kappa.length(); ++j) r *= rising_factorial<T>(a - T(2 * static_cast<int>(j)), kappa[j]);
  return r;
}

/// log of QGamma_m(a) = pi^{m(m-1)} prod_{j=1..m} Gamma(a - 2(j-1)), for a > 2(m-1).
inline double log_qgamma(int m, double a) {
  if (m < 1) throw std::invalid_argument("qgamma: m < 1");
  if (!(a > 2.0 * (m - 1))) throw DomainError("qgamma: argument at or below the pole boundary 2(m-1)");
  double s = m * (m - 1) * std::log(std::numbers::pi);
  for (int j = 0; j < m; ++j) s += std::lgamma(a - 2.0 * j);
  return s;
}

inline double qgamma(int m, double a) { return std::exp(log_qgamma(m, a)); }

/// log of QGamma_m(a, kappa) = pi^{m(m-1)} prod_j Gamma(a + k_j - 2(j-1)), for a > 2(m-1) - k_m.
inline double log_qgamma_kappa(int m, double a, const Partition& kappa) {
  if (m < 1) throw std::invalid_argument("qgamma_kappa: m < 1");
  if (kappa.length() > static_cast<std::size_t>(m)) throw std::invalid_argument("qgamma_kappa: more parts than m");
  if (!(a > 2.0 * (m - 1) - kappa[m - 1])) throw DomainError("qgamma_kappa: argument at or below the pole boundary");
  double s = m * (m - 1) * std::log(std::numbers::pi);
  for (int j = 0; j < m; ++j) s += std::lgamma(a + kappa[j] - 2.0 * j);
  return s;
}

inline double qgamma_kappa(int m, double a, const Partition& kappa) { return std::exp(log_qgamma_kappa(m, a, kappa)); }

/// Number of distinct arrangements of lambda padded with zeros to length m,
/// i.e. the value of the monomial symmetric function M_lambda at the all-ones point.
inline std::uint64_t monomial_orbit_size(const Partition& lambda, int m) {
  if (lambda.length() > static_cast<std::size_t>(m)) throw std::invalid_argument("monomial_orbit_size: too many parts");
  if (m > 20) throw std::invalid_argument("monomial_orbit_size: m > 20 overflows");
  std::vector<int> padded(lambda.parts());
  padded.resize(m, 0);
  std::uint64_t r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  for (std::size_t i = 0; i < padded.size();) {
    std::size_t j = i;
    while (j < padded.size() && padded[j] == padded[i]) ++j;
    for (std::size_t f = 2; f <= j - i; ++f) r /= f;
    i = j;
  }
  return r;
}

/// Multinomial k! / prod lambda_i!: the coefficient of M_lambda in (tr Y)^k.
inline BigInt multinomial(const Partition& lambda) {
  BigInt r{1};
  int n = 0;
  for (int p : lambda.parts()) {
    for (int t = 1; t <= p; ++t) {
      ++n;
      r *= n;
      r /= t;
    }
  }
  return r;
}

}  // namespace qzonal
