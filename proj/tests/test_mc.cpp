#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "support.hpp"
#include "qzonal/mc.hpp"

using namespace qzonal;
using Catch::Approx;

namespace {

bool identical(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const Quaternion &x = a.data()[i], &y = b.data()[i];
    if (x.w != y.w || x.x != y.x || x.y != y.y || x.z != y.z) return false;
  }
  return true;
}

double drift(const QMatrix& h) { return frobenius_norm(conj_transpose(h) * h - QMatrix::identity(h.rows())); }

}  // namespace

TEST_CASE("random streams are reproducible") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs_c = differs_c || x != c.normal();
    differs_d = differs_d || x != d.normal();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  RngStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  RngStream s1(7, 1), s2(7, 1);
  const auto p = WishartParams::isotropic(3, 5, 1.3);
  CHECK(identical(sample_wishart(p, s1), sample_wishart(p, s2)));
  CHECK(identical(sample_haar_unitary(4, s1), sample_haar_unitary(4, s2)));
}

TEST_CASE("quaternion normal entries") {
  RngStream rng(1, 0);
  const QMatrix x = sample_qnormal(500, 500, rng);
  double s1 = 0, s2 = 0, norm2 = 0;
  for (const auto& q : x.data()) {
    for (double c : {q.w, q.x, q.y, q.z}) {
      s1 += c;
      s2 += c * c;
    }
    norm2 += q.norm2();
  }
  const double n = 4.0 * x.data().size();
  const double var = s2 / n - (s1 / n) * (s1 / n);
  CHECK(var == Approx(0.25).epsilon(0.01));
  CHECK(norm2 / x.data().size() == Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(sample_qnormal(0, 2, rng), std::invalid_argument);
}

TEST_CASE("Wishart samples") {
  RngStream rng(2, 0);
  const auto p = WishartParams::isotropic(2, 3);
  const int n_samples = 100000;
  QMatrix mean(2, 2);
  double min_eig = 1e300, asymmetry = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const QMatrix w = sample_wishart(p, rng);
    asymmetry = std::max(asymmetry, frobenius_norm(conj_transpose(w) - w) / frobenius_norm(w));
    mean += w;
    if (s < 2000) min_eig = std::min(min_eig, hermitian_eigenvalues(w).values.back());
  }
  mean *= 1.0 / n_samples;
  CHECK(mean(0, 0).w == Approx(3.0).epsilon(0.02));
  CHECK(mean(1, 1).w == Approx(3.0).epsilon(0.02));
  CHECK((mean(0, 1)).norm() < 0.06);
  CHECK(min_eig >= -1e-10);
  CHECK(asymmetry <= 1e-12);

  SECTION("one dimension is a scaled chi-square") {
    RngStream r(3, 0);
    std::vector<double> v;
    for (int s = 0; s < 10000; ++s) v.push_back(sample_wishart(WishartParams::isotropic(1, 2), r)(0, 0).w);
    const double d = ks_distance(empirical_cdf(v), [](double x) { return x <= 0 ? 0.0 : boost::math::gamma_p(4.0, 2.0 * x); });
    CHECK(d < 1.63 / std::sqrt(10000.0));
  }
  SECTION("trace mean") {
    RngStream r(4, 0);
    const auto q = WishartParams::isotropic(2, 3, 1.5);
    detail::RunningStats st;
    for (int s = 0; s < 20000; ++s) st.add(retr(sample_wishart(q, r)));
    CHECK(std::abs(st.mean() - 2 * 3 * 1.5) <= 3 * st.stderr_of_mean());
  }
  SECTION("Loewner probabilities with a general covariance") {
    RngStream r(5, 0);
    const QMatrix sigma = test::random_positive_definite(2, 81) * 0.3;
    const QMatrix delta = test::random_positive_definite(2, 82) * 1.5;
    const WishartParams q{2, 3, sigma};
    detail::RunningStats less, greater;
    for (int s = 0; s < 20000; ++s) {
      const QMatrix w = sample_wishart(q, r);
      const auto lo = hermitian_eigenvalues(delta - w).values;
      less.add(lo.back() > 0.0 ? 1.0 : 0.0);
      greater.add(lo.front() < 0.0 ? 1.0 : 0.0);
    }
    const double pl = prob_less(delta, q, {200, 1e-14, true}).value;
    const double pg = prob_greater(delta, q);
    CHECK(std::abs(less.mean() - pl) <= 3 * std::sqrt(pl * (1 - pl) / 20000));
    CHECK(std::abs(greater.mean() - pg) <= 3 * std::sqrt(pg * (1 - pg) / 20000));
  }
}

TEST_CASE("sorted eigenvalue pairs follow the joint density") {
  RngStream rng(6, 0);
  const int n_samples = 100000;
  const auto p = WishartParams::isotropic(2, 2);
  // cells in (smaller eigenvalue, gap) coordinates
  const std::vector<double> low{0.0, 0.5, 1.0, 1.6, 80.0}, gap{0.0, 1.2, 2.2, 3.5, 80.0};
  std::vector<double> observed(16, 0.0), expected(16, 0.0);
  for (int s = 0; s < n_samples; ++s) {
    const auto e = hermitian_eigenvalues(sample_wishart(p, rng)).values;
    const auto cell = [](const std::vector<double>& edges, double v) {
      std::size_t i = 0;
      while (i + 2 < edges.size() && v >= edges[i + 1]) ++i;
      return i;
    };
    observed[cell(low, e[1]) * 4 + cell(gap, e[0] - e[1])] += 1.0;
  }
  using boost::math::quadrature::gauss_kronrod;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const double prob = gauss_kronrod<double, 31>::integrate(
          [&](double l2) {
            return gauss_kronrod<double, 31>::integrate(
                [&](double g) { return g > 0 && l2 > 0 ? std::exp(joint_eig_logpdf({l2 + g, l2}, {2, 2, 1.0})) : 0.0; },
                gap[j], gap[j + 1], 8, 1e-12);
          },
          low[i], low[i + 1], 8, 1e-12);
      expected[i * 4 + j] = prob * n_samples;
    }
  double chi2 = 0.0, total = 0.0;
  for (std::size_t c = 0; c < 16; ++c) {
    REQUIRE(expected[c] > 5.0);
    chi2 += (observed[c] - expected[c]) * (observed[c] - expected[c]) / expected[c];
    total += expected[c];
  }
  CHECK(total == Approx(n_samples).epsilon(1e-6));
  const double p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(15), chi2));
  CHECK(p_value > 0.01);
}

TEST_CASE("Haar unitary samples") {
  RngStream rng(8, 0);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) worst = std::max(worst, drift(sample_haar_unitary(3, rng)));
  CHECK(worst < 1e-8);

  SECTION("one dimension is uniform on the sphere") {
    detail::RunningStats st;
    for (int s = 0; s < 200000; ++s) {
      const double w = sample_haar_unitary(1, rng)(0, 0).w;
      st.add(w * w);
    }
    CHECK(st.mean() == Approx(0.25).epsilon(0.01));
  }
  SECTION("first column moments, with and without a fixed left rotation") {
    const std::size_t m = 3;
    const QMatrix g = qr_unitary(test::random_matrix(m, m, 91));
    detail::RunningStats plain, rotated, plain_sq;
    for (int s = 0; s < 50000; ++s) {
      const QMatrix h = sample_haar_unitary(m, rng);
      const QMatrix gh = g * h;
      const double a = h(0, 0).norm2(), b = gh(0, 0).norm2();
      plain.add(a);
      rotated.add(b);
      plain_sq.add(a * a);
    }
    // |h_11|^2 ~ Beta(2, 2(m-1)): mean 1/m, second moment 3/(m(2m+1))
    CHECK(std::abs(plain.mean() - 1.0 / m) <= 3 * plain.stderr_of_mean());
    CHECK(std::abs(rotated.mean() - 1.0 / m) <= 3 * rotated.stderr_of_mean());
    CHECK(std::abs(plain_sq.mean() - 3.0 / (m * (2.0 * m + 1))) <= 3 * plain_sq.stderr_of_mean());
  }
}

TEST_CASE("splitting identity by simulation") {
  RngStream rng(10, 0);
  const auto r1 = mc_splitting_check({1.0, 2.0}, {3.0, 1.0}, Partition{1}, 10000, rng);
  CHECK(r1.analytic == Approx(3.0 * 4.0 / 2.0));
  CHECK(r1.within(3.0));
  const auto r_id = mc_splitting_check({1.0, 2.0}, {1.0, 1.0}, Partition{2, 1}, 1000, rng);
  CHECK(r_id.stderr_ < 1e-12 * std::abs(r_id.analytic));
  CHECK(r_id.within(3.0));
  const auto r2 = mc_splitting_check({1.0, 2.0}, {1.0, 3.0}, Partition{2}, 100000, rng);
  CHECK(r2.within(3.0));
  CHECK_THROWS_AS(mc_splitting_check({1.0}, {1.0}, Partition{1}, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(mc_splitting_check({1.0, -1.0}, {-1.0, 2.0}, Partition{1}, 1000, rng), DomainError);
}

TEST_CASE("group integral by simulation") {
  RngStream rng(12, 0);
  const auto zero = mc_0f1_check(QMatrix(1, 2), 100, rng);
  CHECK(zero.mc_mean == 1.0);
  CHECK(zero.analytic == 1.0);
  const auto scalar = mc_0f1_check(QMatrix{{0.3}}, 100000, rng);
  CHECK(scalar.within(3.0));
  // 0F1(2; t^2/4) = 2 I_1(t)/t, the average of exp(t w) over the unit 3-sphere
  const double t = 1.2;
  CHECK(scalar.analytic == Approx(2.0 * boost::math::cyl_bessel_i(1, t) / t).epsilon(1e-10));
  const QMatrix x{{Quaternion{0.3, 0.1, 0.0, -0.2}, Quaternion{0.0, 0.2, 0.25, 0.0}}};
  const auto r = mc_0f1_check(x * (0.5 / std::sqrt(retr(x * conj_transpose(x)))), 100000, rng);
  CHECK(r.within(3.0));
  CHECK_THROWS_AS(mc_0f1_check(QMatrix(2, 1), 10, rng), std::invalid_argument);
}

TEST_CASE("empirical CDF and KS distance") {
  const int n = 200;
  std::vector<double> q;
  for (int i = 1; i <= n; ++i) q.push_back((i - 0.5) / n);
  CHECK(ks_distance(empirical_cdf(q), [](double x) { return std::clamp(x, 0.0, 1.0); }) <= 0.5 / n + 1e-15);

  RngStream rng(13, 0);
  std::vector<double> u;
  for (int i = 0; i < 10000; ++i) u.push_back(rng.uniform());
  CHECK(ks_distance(empirical_cdf(u), [](double x) { return std::clamp(x, 0.0, 1.0); }) < 1.63 / 100.0);

  const std::vector<double> c(50, 2.0);
  CHECK(ks_distance(empirical_cdf(c), [](double x) { return x >= 2.0 ? 1.0 : 0.0; }) == 0.0);

  const EmpiricalCdf e({3.0, 1.0, 2.0, 2.0});
  CHECK(e(0.5) == 0.0);
  CHECK(e(2.0) == 0.75);
  CHECK(e(3.0) == 1.0);
  CHECK_THROWS_AS(empirical_cdf({}), std::invalid_argument);
}
