#pragma once

/**
 * @file zonal.hpp
 * @brief Exact rational coefficients of quaternion zonal polynomials in the
 * monomial symmetric basis, C_kappa(Y) = sum_{lambda <= kappa} c_{kappa,lambda} M_lambda(Y).
 *
 * Each row is obtained from the eigenfunction recursion
 *
 *   c_{kappa,lambda} = sum_{lambda < mu <= kappa} 4 [(l_i + t) - (l_j - t)] / (rho_kappa - rho_lambda) c_{kappa,mu}
 *
 * where mu runs over the tuples obtained from lambda by moving t = 1..l_j units
 * from part j to an earlier part i < j, re-sorted. Every (i, j, t) contributes
 * its own summand. The recursion fixes a row up to scale; the scale d_kappa
 * comes from requiring sum_kappa C_kappa(Y) = (tr Y)^k, i.e.
 * sum_kappa c_{kappa,lambda} = k! / prod_i l_i! for every lambda.
 *
 * A table restricted to partitions with at most m parts is closed under the
 * recursion (moving units to an earlier part never adds a part), so restricted
 * tables agree entrywise with full ones.
 */

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qzonal/errors.hpp"
#include "qzonal/partitions.hpp"

namespace qzonal {

class ZonalTable;
ZonalTable build_table(int k, int part_cap);

/// Coefficients c_{kappa,lambda} for all partitions of k with at most
/// part_cap parts, stored as a dense upper triangle in decreasing lex order.
class ZonalTable {
 public:
  int k() const { return k_; }
  int part_cap() const { return part_cap_; }
  /// True when no partition of k is excluded by the part cap.
  bool full() const { return part_cap_ >= k_; }
  const std::vector<Partition>& partitions() const { return partitions_; }
  std::size_t size() const { return partitions_.size(); }

  std::optional<std::size_t> index_of(const Partition& p) const {
    auto it = index_.find(p.parts());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// c_{kappa,lambda} by index; zero when lambda precedes kappa.
  const BigRational& coeff(std::size_t kappa, std::size_t lambda) const {
    static const BigRational zero{0};
    if (lambda < kappa) return zero;
    return coeffs_[offset(kappa) + (lambda - kappa)];
  }

  double coeff_double(std::size_t kappa, std::size_t lambda) const {
    if (lambda < kappa) return 0.0;
    return coeffs_double_[offset(kappa) + (lambda - kappa)];
  }

  BigRational coeff(const Partition& kappa, const Partition& lambda) const {
    auto a = index_of(kappa), b = index_of(lambda);
    if (!a || !b) return BigRational{0};
    return coeff(*a, *b);
  }

  /// Leading coefficient d_kappa = c_{kappa,kappa}.
  const BigRational& leading(std::size_t kappa) const { return coeff(kappa, kappa); }

  /// Assemble a table from externally stored rows (e.g. a cache file).
  /// rows[a] holds c_{a,b} for b = a .. size-1.
  static ZonalTable from_rows(int k, int part_cap, std::vector<std::vector<BigRational>> rows) {
    ZonalTable t(k, part_cap);
    if (rows.size() != t.partitions_.size()) throw std::invalid_argument("ZonalTable: row count mismatch");
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (rows[a].size() != t.partitions_.size() - a) throw std::invalid_argument("ZonalTable: row length mismatch");
      for (auto& v : rows[a]) t.coeffs_.push_back(std::move(v));
    }
    t.finish();
    return t;
  }

 private:
  friend ZonalTable build_table(int k, int part_cap);

  ZonalTable(int k, int part_cap) : k_{k}, part_cap_{std::max(1, std::min(part_cap, std::max(k, 1)))} {
    partitions_ = partitions_of(k, part_cap_);
    for (std::size_t i = 0; i < partitions_.size(); ++i) index_.emplace(partitions_[i].parts(), i);
    coeffs_.reserve(offset(partitions_.size()));
  }

  std::size_t offset(std::size_t a) const {
    const std::size_t p = partitions_.size();
    return a * p - (a * (a + 1)) / 2 + a;  // rows 0..a-1 hold p, p-1, ..., p-a+1 entries
  }

  void finish() {
    coeffs_double_.resize(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_double_[i] = coeffs_[i].convert_to<double>();
  }

  int k_ = 0;
  int part_cap_ = 1;
  std::vector<Partition> partitions_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<BigRational> coeffs_;
  std::vector<double> coeffs_double_;
};

/// Builds the coefficient table for degree k restricted to at most part_cap
/// parts (part_cap >= k gives the full table). All arithmetic is exact.
/// Throws NumericalError if the recursion needs to divide a nonzero sum by
/// rho_kappa - rho_lambda = 0, or if a leading coefficient is not positive.
inline ZonalTable build_table(int k, int part_cap) {
  if (k < 0) throw std::invalid_argument("build_table: negative degree");
  if (part_cap < 1) throw std::invalid_argument("build_table: part_cap < 1");
  ZonalTable table(k, part_cap);
  const auto& parts = table.partitions_;
  const std::size_t n = parts.size();

  // moves[b]: (index of mu, summed integer weight) for every mu reachable from lambda_b
  std::vector<std::vector<std::pair<std::size_t, long>>> moves(n);
  for (std::size_t b = 0; b < n; ++b) {
    const std::vector<int>& l = parts[b].parts();
    std::map<std::size_t, long> acc;
    for (std::size_t j = 1; j < l.size(); ++j)
      for (std::size_t i = 0; i < j; ++i)
        for (int t = 1; t <= l[j]; ++t) {
          std::vector<int> mu(l);
          mu[i] += t;
          mu[j] -= t;
          std::sort(mu.begin(), mu.end(), std::greater<>());
          while (!mu.empty() && mu.back() == 0) mu.pop_back();
          const std::size_t idx = table.index_.at(mu);
          if (idx >= b) continue;  // admitted only if mu > lambda
          acc[idx] += 4L * ((l[i] + t) - (l[j] - t));
        }
    moves[b].assign(acc.begin(), acc.end());
  }

  std::vector<long> rhos(n);
  for (std::size_t b = 0; b < n; ++b) rhos[b] = rho(parts[b]);

  // unnormalized rows with unit leading coefficient
  std::vector<std::vector<BigRational>> rows(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<BigRational>& row = rows[a];
    row.assign(n - a, BigRational{0});
    row[0] = 1;
    BigRational sum;
    for (std::size_t b = a + 1; b < n; ++b) {
      sum = 0;
      for (const auto& [mu, w] : moves[b]) {
        if (mu < a) continue;  // mu above kappa
        const BigRational& c = row[mu - a];
        if (c != 0) sum += c * w;
      }
      if (sum == 0) continue;
      const long denom = rhos[a] - rhos[b];
      if (denom == 0)
        throw NumericalError("build_table: rho(" + parts[a].to_string() + ") == rho(" + parts[b].to_string() +
                             ") with a nonzero recursion sum");
      row[b - a] = sum / denom;
    }
  }

  // d_kappa from sum_kappa d_kappa row_kappa(lambda) = k!/prod l_i!, forward in lex order
  std::vector<BigRational> d(n);
  for (std::size_t b = 0; b < n; ++b) {
    BigRational s{multinomial(parts[b])};
    for (std::size_t a = 0; a < b; ++a)
      if (rows[a][b - a] != 0) s -= d[a] * rows[a][b - a];
    if (s <= 0) throw NumericalError("build_table: non-positive leading coefficient for " + parts[b].to_string());
    d[b] = s;
  }

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) table.coeffs_.push_back(d[a] * rows[a][b - a]);
  table.finish();
  return table;
}

/// Converts an exact rational into the working scalar type.
template <class T>
T from_rational(const BigRational& q) {
  if constexpr (std::is_same_v<T, BigRational>) {
    return q;
  } else if constexpr (std::is_floating_point_v<T>) {
    return q.template convert_to<T>();
  } else {
    return T(q);
  }
}

namespace detail {

/// Powers x^0..x^max_exp of each variable.
template <class T>
std::vector<std::vector<T>> power_table(std::span<const T> vars, int max_exp) {
  std::vector<std::vector<T>> pw(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    pw[i].reserve(max_exp + 1);
    pw[i].push_back(T{1});
    for (int e = 1; e <= max_exp; ++e) pw[i].push_back(pw[i].back() * vars[i]);
  }
  return pw;
}

/// Calls f(exponents) for every distinct arrangement of lambda padded to m.
template <class F>
void for_each_arrangement(const Partition& lambda, std::size_t m, F&& f) {
  if (lambda.length() > m) return;
  std::vector<int> e(lambda.parts());
  e.resize(m, 0);
  std::sort(e.begin(), e.end());
  do {
    f(std::as_const(e));
  } while (std::next_permutation(e.begin(), e.end()));
}

template <class T>
T monomial_from_powers(const Partition& lambda, const std::vector<std::vector<T>>& pw) {
  T s{0};
  for_each_arrangement(lambda, pw.size(), [&](const std::vector<int>& e) {
    T term{1};
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= pw[i][e[i]];
    s += term;
  });
  return s;
}

inline void check_table_covers(const ZonalTable& table, std::size_t m) {
  if (!table.full() && static_cast<std::size_t>(table.part_cap()) < m)
    throw std::invalid_argument("zonal: table part cap " + std::to_string(table.part_cap()) +
                                " is below the number of variables " + std::to_string(m));
}

inline std::size_t locate(const ZonalTable& table, const Partition& kappa) {
  if (kappa.weight() != table.k())
    throw std::invalid_argument("zonal: partition " + kappa.to_string() + " does not have weight " +
                                std::to_string(table.k()));
  auto idx = table.index_of(kappa);
  if (!idx)
    throw DomainError("zonal: partition " + kappa.to_string() + " has more parts than the table cap " +
                      std::to_string(table.part_cap()));
  return *idx;
}

}  // namespace detail

/// M_lambda(vars): sum of the monomial over the distinct arrangements of lambda.
template <class T>
T monomial_value(const Partition& lambda, std::span<const T> vars) {
  if (lambda.length() > vars.size()) return T{0};
  return detail::monomial_from_powers(lambda, detail::power_table(vars, lambda[0]));
}

/// C_kappa evaluated at the eigenvalue tuple `eigs` in the working type T.
template <class T>
T eval_zonal(const ZonalTable& table, const Partition& kappa, std::span<const T> eigs) {
  const std::size_t a = detail::locate(table, kappa);
  if (kappa.length() > eigs.size()) return T{0};
  detail::check_table_covers(table, eigs.size());
  const auto pw = detail::power_table(eigs, table.k());
  T s{0};
  for (std::size_t b = a; b < table.size(); ++b) {
    const Partition& lambda = table.partitions()[b];
    if (lambda.length() > eigs.size()) continue;
    if constexpr (std::is_same_v<T, double>) {
      s += table.coeff_double(a, b) * detail::monomial_from_powers(lambda, pw);
    } else {
      s += from_rational<T>(table.coeff(a, b)) * detail::monomial_from_powers(lambda, pw);
    }
  }
  return s;
}

/// C_kappa(eigs) for every kappa of the table at once, sharing the monomial
/// values. `coeffs` optionally supplies the table entries already converted to
/// T (flattened upper triangle, row by row); partitions with more parts than
/// eigs.size() evaluate to zero.
template <class T>
std::vector<T> eval_all_zonal(const ZonalTable& table, std::span<const T> eigs, std::span<const T> coeffs = {}) {
  detail::check_table_covers(table, eigs.size());
  const std::size_t n = table.size();
  const auto pw = detail::power_table(eigs, table.k());
  std::vector<T> mono(n, T{0});
  for (std::size_t b = 0; b < n; ++b)
    if (table.partitions()[b].length() <= eigs.size()) mono[b] = detail::monomial_from_powers(table.partitions()[b], pw);
  std::vector<T> out(n, T{0});
  std::size_t pos = 0;
  for (std::size_t a = 0; a < n; ++a) {
    T s{0};
    for (std::size_t b = a; b < n; ++b, ++pos) {
      if (table.partitions()[b].length() > eigs.size()) continue;
      if (!coeffs.empty()) {
        s += coeffs[pos] * mono[b];
      } else if constexpr (std::is_same_v<T, double>) {
        s += table.coeff_double(a, b) * mono[b];
      } else {
        s += from_rational<T>(table.coeff(a, b)) * mono[b];
      }
    }
    if (table.partitions()[a].length() <= eigs.size()) out[a] = s;
  }
  return out;
}

inline double eval_zonal(const ZonalTable& table, const Partition& kappa, const std::vector<double>& eigs) {
  return eval_zonal<double>(table, kappa, std::span<const double>(eigs));
}

inline BigRational eval_zonal_rational(const ZonalTable& table, const Partition& kappa,
                                       const std::vector<BigRational>& eigs) {
  return eval_zonal<BigRational>(table, kappa, std::span<const BigRational>(eigs));
}

/// C_kappa(I_m) = sum_lambda c_{kappa,lambda} * (number of arrangements of lambda in m slots).
inline BigRational zonal_at_identity(const ZonalTable& table, const Partition& kappa, int m) {
  if (m < 1) throw std::invalid_argument("zonal_at_identity: m < 1");
  const std::size_t a = detail::locate(table, kappa);
  if (kappa.length() > static_cast<std::size_t>(m)) return BigRational{0};
  detail::check_table_covers(table, m);
  BigRational s{0};
  for (std::size_t b = a; b < table.size(); ++b) {
    const Partition& lambda = table.partitions()[b];
    if (lambda.length() > static_cast<std::size_t>(m)) continue;
    s += table.coeff(a, b) * BigRational{monomial_orbit_size(lambda, m)};
  }
  return s;
}

/// Exact evaluation of both sides of the eigenfunction equation
///   sum_i y_i^2 d^2C/dy_i^2 + sum_{i != j} 4 y_i^2/(y_i - y_j) dC/dy_i = (rho_kappa + k(4m - 1)) C
/// at a point with pairwise distinct coordinates. Returns (lhs, rhs).
inline std::pair<BigRational, BigRational> apply_operator_check(const ZonalTable& table, const Partition& kappa,
                                                                const std::vector<BigRational>& y) {
  const std::size_t m = y.size();
  if (m == 0) throw std::invalid_argument("apply_operator_check: empty point");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (y[i] == y[j]) throw DomainError("apply_operator_check: repeated coordinates are poles of the operator");
  const std::size_t a = detail::locate(table, kappa);
  detail::check_table_covers(table, m);

  const auto pw = detail::power_table(std::span<const BigRational>(y), std::max(table.k(), 0));
  BigRational value{0};
  std::vector<BigRational> d1(m), d2(m);
  for (std::size_t b = a; b < table.size(); ++b) {
    const Partition& lambda = table.partitions()[b];
    const BigRational& c = table.coeff(a, b);
    if (c == 0 || lambda.length() > m) continue;
    detail::for_each_arrangement(lambda, m, [&](const std::vector<int>& e) {
      BigRational term = c;
      for (std::size_t i = 0; i < m; ++i)
        if (e[i]) term *= pw[i][e[i]];
      value += term;
      for (std::size_t i = 0; i < m; ++i) {
        if (e[i] == 0) continue;
        // the derivative of y_i^e is e y_i^{e-1}; rebuild the product without y_i^e
        BigRational rest = c;
        for (std::size_t l = 0; l < m; ++l)
          if (l != i && e[l]) rest *= pw[l][e[l]];
        d1[i] += rest * e[i] * pw[i][e[i] - 1];
        if (e[i] >= 2) d2[i] += rest * (e[i] * (e[i] - 1)) * pw[i][e[i] - 2];
      }
    });
  }

  BigRational lhs{0};
  for (std::size_t i = 0; i < m; ++i) {
    lhs += y[i] * y[i] * d2[i];
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) lhs += 4 * y[i] * y[i] / (y[i] - y[j]) * d1[i];
  }
  const long factor = rho(kappa) + static_cast<long>(table.k()) * (4 * static_cast<long>(m) - 1);
  return {lhs, value * factor};
}

}  // namespace qzonal
