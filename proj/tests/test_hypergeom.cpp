#include <cmath>

#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "support.hpp"
#include "qzonal/hypergeom.hpp"

using namespace qzonal;
using qzonal::test::rel_close;
using Catch::Approx;

namespace {

// Scalar pFq by direct summation of its terms.
double scalar_pfq(const std::vector<double>& a, const std::vector<double>& b, double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 2000; ++k) {
    for (double ai : a) term *= ai + k;
    for (double bj : b) term /= bj + k;
    term *= x / (k + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("exponential trace") {
  CHECK(etr({}) == 1.0);
  CHECK(etr({0.3}) == Approx(std::exp(0.3)).epsilon(1e-15));
  for (const auto& x : {std::vector<double>{0.1, 0.2}, std::vector<double>{-1.5, 0.7, 2.0}, std::vector<double>{3.0}}) {
    const auto r = pfq({}, {}, x);
    CHECK(r.converged);
    CHECK(rel_close(r.value, etr(x), 1e-12));
  }
}

TEST_CASE("1F0 against its closed form") {
  CHECK(one_f_zero_closed(2.5, {0.0}) == 1.0);
  CHECK(one_f_zero_closed(3.0, {0.5}) == Approx(8.0).epsilon(1e-15));
  CHECK_THROWS_AS(one_f_zero_closed(1.0, {1.0}), DomainError);
  CHECK(pfq({3.0}, {}, {0.5}).value == Approx(8.0).epsilon(1e-11));
  CHECK(pfq({7.0}, {}, {0.0, 0.0}).value == 1.0);
  const auto r = pfq({4.5}, {}, {0.2, -0.3}, {40, 1e-12, false});
  CHECK(std::abs(r.value - one_f_zero_closed(4.5, {0.2, -0.3})) < 1e-9);
  const auto r3 = pfq({6.0}, {}, {0.4, -0.1, 0.25}, {80, 1e-14, true});
  CHECK(rel_close(r3.value, one_f_zero_closed(6.0, {0.4, -0.1, 0.25}), 1e-11));
}

TEST_CASE("one eigenvalue reduces to the scalar series") {
  for (double x : {-3.0, -0.5, 0.25, 2.0}) {
    CHECK(rel_close(pfq({2.5}, {4.0}, {x}).value, boost::math::hypergeometric_1F1(2.5, 4.0, x), 1e-10));
    CHECK(rel_close(pfq({1.5}, {3.25}, {x}).value, scalar_pfq({1.5}, {3.25}, x), 1e-10));
    CHECK(rel_close(pfq({}, {2.0}, {x}).value, scalar_pfq({}, {2.0}, x), 1e-10));
  }
  CHECK(rel_close(pfq({0.5, 1.5}, {2.5}, {0.6}).value, scalar_pfq({0.5, 1.5}, {2.5}, 0.6), 1e-10));
}

TEST_CASE("Kummer transformation at large arguments") {
  // 1F1(a; c; X) = etr(X) 1F1(c - a; c; -X); the left side cancels heavily
  const TruncationPolicy p{300, 1e-15, true};
  const std::vector<double> x{-14.0, -9.0}, minus_x{14.0, 9.0};
  const double lhs = pfq({3.0}, {7.5}, x, p).value;
  const double rhs = etr(x) * pfq({4.5}, {7.5}, minus_x, p).value;
  CHECK(rel_close(lhs, rhs, 1e-9));
}

TEST_CASE("terminating series") {
  // 1F1(-N; b; x) at m = 1 is a polynomial of degree N
  const auto r = pfq({-3.0}, {2.5}, {1.7});
  CHECK(r.converged);
  CHECK(r.degree_used <= 3);
  CHECK(rel_close(r.value, scalar_pfq({-3.0}, {2.5}, 1.7), 1e-13));
  // p > q + 1 is allowed when the series terminates
  const auto t = pfq({-2.0, 1.5}, {}, {0.3, 0.8});
  CHECK(t.converged);
  CHECK(t.degree_used <= 4);
  CHECK(pfq({-1.0, 2.0}, {}, {0.5}).value == Approx(0.0).margin(1e-15));
}

TEST_CASE("domain and divergence errors") {
  CHECK_THROWS_AS(pfq({1.0, 1.0}, {}, {2.0}), DivergenceError);
  CHECK_THROWS_AS(pfq({1.0, 1.0}, {}, {0.1}), DivergenceError);
  CHECK_THROWS_AS(pfq({1.0}, {}, {1.0}), DivergenceError);
  CHECK_THROWS_AS(pfq({1.0, 2.0}, {3.0}, {0.2, -1.0}), DivergenceError);
  CHECK_NOTHROW(pfq({1.0, 2.0}, {3.0}, {0.2, -0.5}));
  CHECK_THROWS_AS(pfq({1.0, 2.0}, {3.0}, {0.2, -0.9}), TruncationError);
  // (2)_(1,1) = 2 * 0 vanishes for two eigenvalues
  CHECK_THROWS_AS(pfq({1.0}, {2.0}, {0.1, 0.2}), DomainError);
  CHECK_THROWS_AS(pfq({}, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(pfq({}, {}, {std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(pfq({}, {}, {0.1}, {-1, 1e-12, true}), std::invalid_argument);
  CHECK_THROWS_AS(pfq({}, {}, {0.1}, {10, 0.0, true}), std::invalid_argument);
}

TEST_CASE("degree cap") {
  CHECK_THROWS_AS(pfq({}, {}, {5.0}, {5, 1e-12, true}), TruncationError);
  const auto r = pfq({}, {}, {5.0}, {5, 1e-12, false});
  CHECK_FALSE(r.converged);
  CHECK(r.degree_used == 5);
  CHECK(r.last_layer_magnitude == Approx(std::pow(5.0, 5) / 120.0));
}

TEST_CASE("stopping rule is stable against extra layers") {
  const std::vector<std::tuple<std::vector<double>, std::vector<double>, std::vector<double>>> cases{
      {{7.0}, {9.0}, {0.8, -0.4, 0.3}}, {{}, {8.0}, {1.5, 0.5}}, {{5.0, 6.5}, {7.0, 9.0}, {0.9, 0.2}}, {{}, {}, {-2.0, 1.0}}};
  for (const auto& [a, b, x] : cases) {
    const TruncationPolicy base{};
    const auto r = pfq(a, b, x, base);
    REQUIRE(r.converged);
    const auto more = pfq(a, b, x, {r.degree_used + 10, 1e-300, false});
    CHECK(more.degree_used == r.degree_used + 10);
    CHECK(std::abs(more.value - r.value) < 10 * base.layer_tol * std::abs(r.value));
  }
}

TEST_CASE("layers are homogeneous") {
  const std::vector<double> x{0.4, -0.7, 0.2};
  std::vector<double> cx;
  for (double v : x) cx.push_back(2.5 * v);
  for (int k = 0; k <= 6; ++k) {
    const double base = pfq_layer({3.5}, {6.0}, x, k);
    CHECK(pfq_layer({3.5}, {6.0}, cx, k) == Approx(std::pow(2.5, k) * base).epsilon(1e-12).margin(1e-15));
  }
  double total = 0.0;
  for (int k = 0; k <= 40; ++k) total += pfq_layer({3.5}, {6.0}, x, k);
  CHECK(total == Approx(pfq({3.5}, {6.0}, x).value).epsilon(1e-12));
}

TEST_CASE("weighted series applies the weight per layer") {
  const std::vector<double> x{0.3, 0.6};
  const auto w = pfq_weighted({4.0}, {7.0}, x, [](int k) { return static_cast<double>(k); });
  double expected = 0.0;
  for (int k = 1; k <= 60; ++k) expected += k * pfq_layer({4.0}, {7.0}, x, k);
  CHECK(w.value == Approx(expected).epsilon(1e-12));
}

TEST_CASE("two-matrix series") {
  const std::vector<double> x{0.3, -0.5};
  CHECK(rel_close(pfq_two({2.0}, {5.0}, x, {1.0, 1.0}).value, pfq({2.0}, {5.0}, x).value, 1e-12));
  CHECK(rel_close(pfq_two({}, {}, {0.7}, {1.3}).value, std::exp(0.7 * 1.3), 1e-12));
  const double s = pfq_two({}, {}, x, {0.8, 0.2}).value;
  CHECK(s == Approx(pfq_two({}, {}, {0.8, 0.2}, x).value).epsilon(1e-12));
  CHECK_THROWS_AS(pfq_two({}, {}, x, {1.0}), std::invalid_argument);
  CHECK(pfq_two({}, {}, x, {0.0, 0.0}).value == 1.0);
}

TEST_CASE("identical inputs give bit-identical results") {
  const auto a = pfq({2.25}, {5.5}, {1.2, -0.4, 0.9});
  const auto b = pfq({2.25}, {5.5}, {1.2, -0.4, 0.9});
  CHECK(a.value == b.value);
  CHECK(a.degree_used == b.degree_used);
  CHECK(a.last_layer_magnitude == b.last_layer_magnitude);
}
