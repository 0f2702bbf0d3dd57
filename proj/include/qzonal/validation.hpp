#pragma once

/**
 * @file validation.hpp
 * @brief The acceptance checks, runnable at two sizes.
 *
 * `full` uses the sample sizes and ranges of the acceptance criteria; `fast`
 * shrinks the Monte Carlo sample counts and the exact-identity ranges so the
 * whole suite runs in well under a minute. Every random choice is drawn from
 * RngStream(seed, stream) with a fixed stream per check, and the report
 * carries no timings, so a seed reproduces the report byte for byte.
 *
 * Report schema (docs/validation_report.md):
 *   {"suite": "fast"|"full", "seed": uint, "passed": bool,
 *    "checks": [{"id": str, "criterion": int, "passed": bool, "metrics": {...}, "message": str}]}
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "qzonal/hypergeom.hpp"
#include "qzonal/mc.hpp"
#include "qzonal/partitions.hpp"
#include "qzonal/qalg.hpp"
#include "qzonal/reference_table.hpp"
#include "qzonal/table_cache.hpp"
#include "qzonal/wishart.hpp"
#include "qzonal/zonal.hpp"

namespace qzonal {

inline constexpr std::uint64_t default_seed = 20240607;

enum class SuiteLevel { fast, full };

struct CheckResult {
  std::string id;
  int criterion = 0;
  bool passed = false;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  std::string message;
};

namespace validation {

inline std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(digits);
  os << v;
  return os.str();
}

/// Random rational num/den with |num| <= 9, 1 <= den <= 9.
inline BigRational random_rational(RngStream& rng) {
  const int num = static_cast<int>(rng.uniform() * 19.0) - 9;
  const int den = 1 + static_cast<int>(rng.uniform() * 9.0);
  return BigRational{num, den};
}

inline std::vector<BigRational> random_distinct_point(std::size_t m, RngStream& rng) {
  std::vector<BigRational> y;
  while (y.size() < m) {
    BigRational v = random_rational(rng);
    if (std::find(y.begin(), y.end(), v) == y.end()) y.push_back(v);
  }
  return y;
}

inline CheckResult table_reproduction() {
  CheckResult r{"table_reproduction", 1};
  int mismatches = 0, entries = 0;
  std::string first;
  for (int k = 2; k <= 5; ++k) {
    const ZonalTable t = build_table(k, k);
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = 0; b < t.size(); ++b) {
        ++entries;
        if (t.coeff(a, b) != reference_coefficient(k, a, b)) {
          if (!mismatches)
            first = "k=" + std::to_string(k) + " " + t.partitions()[a].to_string() + "," +
                    t.partitions()[b].to_string();
          ++mismatches;
        }
      }
  }
  r.passed = mismatches == 0;
  r.metrics["entries"] = entries;
  r.metrics["mismatches"] = mismatches;
  r.message = r.passed ? "all " + std::to_string(entries) + " entries equal" : "first mismatch at " + first;
  return r;
}

inline CheckResult normalization(SuiteLevel level, std::uint64_t seed) {
  CheckResult r{"normalization", 2};
  const int kmax = level == SuiteLevel::full ? 8 : 6;
  const int points = level == SuiteLevel::full ? 10 : 3;
  RngStream rng(seed, 200);
  int failures = 0, checks = 0;
  for (int k = 1; k <= kmax; ++k) {
    const int m = std::min(k, 5);
    const ZonalTable t = build_table(k, m);
    for (int p = 0; p < points; ++p) {
      std::vector<BigRational> y;
      for (int i = 0; i < m; ++i) y.push_back(random_rational(rng));
      BigRational lhs{0}, tr{0};
      for (const auto& kappa : t.partitions()) lhs += eval_zonal_rational(t, kappa, y);
      for (const auto& v : y) tr += v;
      BigRational rhs{1};
      for (int i = 0; i < k; ++i) rhs *= tr;
      ++checks;
      if (lhs != rhs) ++failures;
    }
  }
  r.passed = failures == 0;
  r.metrics["k_max"] = kmax;
  r.metrics["points"] = checks;
  r.metrics["failures"] = failures;
  r.message = std::to_string(checks - failures) + "/" + std::to_string(checks) + " exact equalities";
  return r;
}

inline CheckResult eigenfunction(SuiteLevel level, std::uint64_t seed) {
  CheckResult r{"eigenfunction", 3};
  const int kmax = level == SuiteLevel::full ? 6 : 4;
  const int points = level == SuiteLevel::full ? 5 : 2;
  RngStream rng(seed, 300);
  int failures = 0, checks = 0;
  std::string first;
  for (int m = 2; m <= 4; ++m)
    for (int k = 1; k <= kmax; ++k) {
      const auto t = table_cache().get(k, m);
      for (const auto& kappa : t->partitions()) {
        if (kappa.length() > static_cast<std::size_t>(m)) continue;
        for (int p = 0; p < points; ++p) {
          const auto [lhs, rhs] = apply_operator_check(*t, kappa, random_distinct_point(m, rng));
          ++checks;
          if (lhs != rhs) {
            if (!failures) first = kappa.to_string() + " m=" + std::to_string(m);
            ++failures;
          }
        }
      }
    }
  r.passed = failures == 0;
  r.metrics["k_max"] = kmax;
  r.metrics["checks"] = checks;
  r.metrics["failures"] = failures;
  r.message = r.passed ? std::to_string(checks) + " exact equalities" : "first failure at " + first;
  return r;
}

/// Eigenvalues of a random Hermitian quaternion matrix rescaled to spectral radius 0.5 U.
inline std::vector<double> random_argument(std::size_t m, RngStream& rng) {
  const QMatrix x = sample_qnormal(m, m, rng);
  QMatrix h = (x + conj_transpose(x)) * 0.5;
  std::vector<double> e = hermitian_eigenvalues(h).values;
  double rad = 0.0;
  for (double v : e) rad = std::max(rad, std::abs(v));
  const double target = 0.5 * rng.uniform();
  for (double& v : e) v *= target / rad;
  return e;
}

inline CheckResult closed_forms(std::uint64_t seed) {
  CheckResult r{"closed_forms", 4};
  RngStream rng(seed, 400);
  const TruncationPolicy policy{60, 1e-17, false};
  double worst0 = 0.0, worst1 = 0.0;
  std::string worst1_case;
  for (int i = 0; i < 20; ++i) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
    const std::vector<double> z = random_argument(m, rng);
    const double lo = 2.0 * (static_cast<double>(m) - 1.0);
    const double a = 8.0 - (8.0 - lo) * rng.uniform();  // (lo, 8]
    worst0 = std::max(worst0, std::abs(pfq({}, {}, z, policy).value - etr(z)));
    const double err = std::abs(pfq({a}, {}, z, policy).value - one_f_zero_closed(a, z));
    if (err > worst1) {
      worst1 = err;
      worst1_case = "m=" + std::to_string(m) + " a=" + fmt(a) + " radius=" + fmt(detail::max_abs(z));
    }
  }
  r.passed = worst0 <= 1e-9 && worst1 <= 1e-9;
  r.metrics["max_abs_err_0f0"] = worst0;
  r.metrics["max_abs_err_1f0"] = worst1;
  r.message = "0F0 " + fmt(worst0) + ", 1F0 " + fmt(worst1) + " (" + worst1_case + "), tol 1e-9";
  return r;
}

inline CheckResult scalar_oracles() {
  CheckResult r{"scalar_oracles", 5};
  double worst = 0.0;
  for (double sigma2 : {1.0, 2.5})
    for (int n : {1, 2, 4})
      for (double ratio : {0.25, 1.0, 3.0}) {
        const auto p = WishartParams::isotropic(1, n, sigma2);
        const double x = ratio * sigma2;
        const double cdf = lambda_max_cdf(x, p).value;
        const double sf = lambda_min_sf(x, p);
        const double pp = boost::math::gamma_p(2.0 * n, 2.0 * ratio);
        const double qq = boost::math::gamma_q(2.0 * n, 2.0 * ratio);
        worst = std::max({worst, std::abs(cdf - pp) / pp, std::abs(sf - qq) / qq});
      }
  r.passed = worst <= 1e-9;
  r.metrics["max_rel_err"] = worst;
  r.message = "max relative error " + fmt(worst) + ", tol 1e-9";
  return r;
}

inline CheckResult mc_distribution(SuiteLevel level, std::uint64_t seed) {
  CheckResult r{"mc_distribution", 6};
  const int samples = level == SuiteLevel::full ? 200000 : 50000;
  const TruncationPolicy policy{200, 1e-15, false};
  const TruncationPolicy longer{220, 1e-15, false};
  bool ok = true;
  std::string msg;
  for (int n : {2, 3}) {
    const auto p = WishartParams::isotropic(2, n, 1.0);
    RngStream rng(seed, 600 + static_cast<std::uint64_t>(n));
    std::vector<double> lmax, lmin;
    lmax.reserve(samples);
    lmin.reserve(samples);
    for (int s = 0; s < samples; ++s) {
      const auto e = hermitian_eigenvalues(sample_wishart(p, rng)).values;
      lmax.push_back(e.front());
      lmin.push_back(e.back());
    }
    const EmpiricalCdf emax(lmax), emin(lmin);
    double dmax = 0.0, dmin = 0.0, trunc = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const std::size_t idx = static_cast<std::size_t>((i - 0.5) / 10.0 * samples);
      const double xm = emax.sorted_samples()[idx];
      const auto c = lambda_max_cdf(xm, p, policy);
      trunc = std::max(trunc, std::abs(c.value - lambda_max_cdf(xm, p, longer).value));
      dmax = std::max(dmax, std::abs(emax(xm) - c.value));
      const double xn = emin.sorted_samples()[idx];
      dmin = std::max(dmin, std::abs((1.0 - emin(xn)) - lambda_min_sf(xn, p)));
    }
    const bool pass = dmax < 0.01 && dmin < 0.01 && trunc < 1e-6;
    ok = ok && pass;
    const std::string key = "n" + std::to_string(n);
    r.metrics[key + "_lmax_sup"] = dmax;
    r.metrics[key + "_lmin_sup"] = dmin;
    r.metrics[key + "_truncation"] = trunc;
    msg += (msg.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " lmax " + fmt(dmax, 3) + " lmin " +
           fmt(dmin, 3) + " trunc " + fmt(trunc, 3);
  }
  r.metrics["samples"] = samples;
  r.passed = ok;
  r.message = msg + " (N=" + std::to_string(samples) + ")";
  return r;
}

inline CheckResult splitting(SuiteLevel level, std::uint64_t seed) {
  CheckResult r{"splitting", 7};
  const int samples = level == SuiteLevel::full ? 100000 : 20000;
  const std::vector<double> x1{1.0, 2.0}, x2{1.0, 3.0};
  bool ok = true;
  double worst = 0.0;
  std::uint64_t stream = 700;
  for (int k = 1; k <= 3; ++k)
    for (const auto& kappa : partitions_of(k, 2)) {
      RngStream rng(seed, stream++);
      const McEstimate e = mc_splitting_check(x1, x2, kappa, samples, rng);
      worst = std::max(worst, e.z_score());
      ok = ok && e.within(3.0);
      r.metrics[kappa.to_string()] = {{"mc_mean", e.mc_mean}, {"analytic", e.analytic}, {"stderr", e.stderr_}};
    }
  r.passed = ok;
  r.message = "max |mc - analytic| / se = " + fmt(worst, 3) + " (N=" + std::to_string(samples) + ")";
  return r;
}

/// m x n quaternion matrix with spectral norm `norm`.
inline QMatrix random_with_norm(std::size_t m, std::size_t n, double norm, RngStream& rng) {
  QMatrix x = sample_qnormal(m, n, rng);
  const double top = hermitian_eigenvalues(x * conj_transpose(x)).values.front();
  return x * (norm / std::sqrt(top));
}

inline CheckResult group_integral(SuiteLevel level, std::uint64_t seed) {
  CheckResult r{"group_integral", 8};
  const int samples = level == SuiteLevel::full ? 100000 : 20000;
  bool ok = true;
  double worst = 0.0;
  const std::pair<int, int> shapes[] = {{1, 1}, {1, 2}, {2, 2}};
  std::uint64_t stream = 800;
  for (auto [m, n] : shapes) {
    RngStream rng(seed, stream++);
    const QMatrix x = random_with_norm(m, n, 0.5, rng);
    const McEstimate e = mc_0f1_check(x, samples, rng);
    worst = std::max(worst, e.z_score());
    ok = ok && e.within(3.0);
    r.metrics["m" + std::to_string(m) + "n" + std::to_string(n)] = {
        {"mc_mean", e.mc_mean}, {"analytic", e.analytic}, {"stderr", e.stderr_}};
  }
  r.passed = ok;
  r.message = "max |mc - analytic| / se = " + fmt(worst, 3) + " (N=" + std::to_string(samples) + ")";
  return r;
}

/// Integral of the m = 2 joint eigenvalue density over l1 > l2 > 0.
inline double joint_density_mass(int n, double sigma2, EigRate rate) {
  boost::math::quadrature::exp_sinh<double> outer, inner;
  const EigDensityParams p{2, n, sigma2};
  auto f = [&](double l2) {
    return inner.integrate([&](double t) {
      const double l1 = l2 + t;
      if (!(t > 0.0) || !(l1 > l2) || !(l2 > 0.0)) return 0.0;
      return std::exp(joint_eig_logpdf({l1, l2}, p, rate));
    });
  };
  return outer.integrate(f);
}

inline CheckResult joint_density(std::uint64_t /*seed*/) {
  CheckResult r{"joint_density", 9};
  bool ok = true;
  std::string msg;
  for (int n : {2, 3}) {
    const double mass = joint_density_mass(n, 1.0, EigRate::derived);
    const double printed = joint_density_mass(n, 1.0, EigRate::printed);
    ok = ok && std::abs(mass - 1.0) <= 1e-4;
    r.metrics["n" + std::to_string(n) + "_mass"] = mass;
    r.metrics["n" + std::to_string(n) + "_mass_printed_rate"] = printed;
    msg += (msg.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " mass " + fmt(mass, 10) +
           " (rate 1/(2 sigma^2) gives " + fmt(printed, 6) + ")";
  }
  r.passed = ok;
  r.message = msg;
  return r;
}

inline CheckResult scalar_integrals() {
  CheckResult r{"scalar_integrals", 10};
  boost::math::quadrature::exp_sinh<double> half_line;
  boost::math::quadrature::tanh_sinh<double> unit;
  double worst = 0.0;
  // Laplace transform: int_0^inf e^{-xz} x^{a-1} x^k dx = (a)_k Gamma(a) z^{-a-k}
  for (auto [a, k, z] : {std::tuple{3.0, 2, 1.5}, std::tuple{2.5, 3, 0.75}, std::tuple{4.0, 1, 2.0}}) {
    const double lhs = half_line.integrate([&](double x) {
      return x > 0.0 && std::isfinite(x) ? std::exp(-x * z + (a - 1.0 + k) * std::log(x)) : 0.0;
    });
    const double rhs = gen_pochhammer<double>(a, Partition{k}) * qgamma(1, a) * std::pow(z, -a - k);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  // Beta integral: int_0^1 x^{a-1} x^k dx = (a)_k/(a+1)_k QG_1(a) QG_1(1) / QG_1(a+1)
  for (auto [a, k] : {std::pair{3.0, 2}, std::pair{1.5, 4}, std::pair{5.0, 0}}) {
    const double lhs = unit.integrate([&](double x) { return std::pow(x, a - 1.0 + k); }, 0.0, 1.0);
    const Partition kappa = k ? Partition{k} : Partition{};
    const double rhs = gen_pochhammer<double>(a, kappa) / gen_pochhammer<double>(a + 1.0, kappa) * qgamma(1, a) *
                       qgamma(1, 1.0) / qgamma(1, a + 1.0);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  r.passed = worst <= 1e-8;
  r.metrics["max_rel_err"] = worst;
  r.message = "max relative error " + fmt(worst) + ", tol 1e-8";
  return r;
}

}  // namespace validation

/// Criteria 1-10 at the given size, in criterion order.
inline std::vector<CheckResult> run_checks(SuiteLevel level, std::uint64_t seed) {
  using namespace validation;
  return {table_reproduction(),       normalization(level, seed), eigenfunction(level, seed),
          closed_forms(seed),         scalar_oracles(),           mc_distribution(level, seed),
          splitting(level, seed),     group_integral(level, seed), joint_density(seed),
          scalar_integrals()};
}

inline nlohmann::ordered_json report_json(SuiteLevel level, std::uint64_t seed, const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json j;
  j["suite"] = level == SuiteLevel::full ? "full" : "fast";
  j["seed"] = seed;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    arr.push_back({{"id", c.id}, {"criterion", c.criterion}, {"passed", c.passed}, {"metrics", c.metrics},
                   {"message", c.message}});
  }
  j["passed"] = all;
  j["checks"] = std::move(arr);
  return j;
}

/// Runs a suite and returns its report.
inline nlohmann::ordered_json run_validation(SuiteLevel level, std::uint64_t seed = default_seed) {
  return report_json(level, seed, run_checks(level, seed));
}

}  // namespace qzonal
