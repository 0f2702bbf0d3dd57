#include <algorithm>
#include <cmath>
#include <complex>

#include "support.hpp"
#include "qzonal/qalg.hpp"

using namespace qzonal;
using qzonal::test::rel_close;
using Catch::Approx;

namespace {

bool same(const Quaternion& a, const Quaternion& b, double tol = 1e-14) { return (a - b).norm() <= tol; }

double max_diff(const CMatrix& a, const CMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

double max_abs(const CMatrix& a) {
  double d = 0.0;
  for (auto v : a.data()) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace

TEST_CASE("quaternion products follow the unit relations") {
  const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  CHECK(same(i * j, k));
  CHECK(same(j * i, -k));
  CHECK(same(i * i, Quaternion{-1.0}));
  const Quaternion q{0.3, -1.2, 2.5, 0.7};
  CHECK(same(q * Quaternion{1.0}, q));
  CHECK(same((Quaternion{1.0} + i) * (Quaternion{1.0} + j), Quaternion{1, 1, 1, 1}));
  CHECK(same(q * q.inverse(), Quaternion{1.0}));
}

TEST_CASE("conj_transpose and retr") {
  const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  const QMatrix a{{1.0, j}, {0.0, k}};
  const QMatrix ah = conj_transpose(a);
  CHECK(same(ah(0, 0), 1.0));
  CHECK(same(ah(0, 1), 0.0));
  CHECK(same(ah(1, 0), -j));
  CHECK(same(ah(1, 1), -k));
  CHECK(same(conj_transpose(QMatrix{{i}})(0, 0), -i));
  const QMatrix h = test::random_hermitian(3, 1);
  CHECK(frobenius_norm(conj_transpose(h) - h) == 0.0);

  CHECK(retr(QMatrix::identity(3)) == 3.0);
  CHECK(retr(QMatrix{{i}}) == 0.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const QMatrix x = test::random_matrix(3, 4, 10 + s), y = test::random_matrix(4, 3, 100 + s);
    CHECK(rel_close(retr(x * y), retr(y * x), 1e-12, 1e-13));
  }
}

TEST_CASE("complex representation") {
  const CMatrix id = complex_rep(QMatrix::identity(3));
  CHECK(max_diff(id, CMatrix::identity(6)) == 0.0);

  const CMatrix cj = complex_rep(QMatrix{{Quaternion::j()}});
  CHECK(cj(0, 0) == Complex(0, 0));
  CHECK(cj(0, 1) == Complex(-1, 0));
  CHECK(cj(1, 0) == Complex(1, 0));
  CHECK(cj(1, 1) == Complex(0, 0));

  const CMatrix ch = complex_rep(test::random_hermitian(3, 3));
  CHECK(max_diff(ch, adjoint(ch)) == 0.0);

  SECTION("multiplicative") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const QMatrix a = test::random_matrix(3, 3, 20 + s), b = test::random_matrix(3, 3, 40 + s);
      const CMatrix lhs = complex_rep(a * b), rhs = complex_rep(a) * complex_rep(b);
      CHECK(max_diff(lhs, rhs) <= 1e-12 * max_abs(lhs));
    }
  }
}

TEST_CASE("real representations") {
  const auto [r1, r2] = real_reps(QMatrix::identity(2));
  CHECK(r1.data().size() == 64);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(r1(i, j) == (i == j ? 1.0 : 0.0));
      CHECK(r2(i, j) == (i == j ? 1.0 : 0.0));
    }

  const auto ri = real_reps(QMatrix{{Quaternion::i()}}).first;
  const double expected[4][4] = {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(ri(i, j) == expected[i][j]);

  SECTION("determinant relations") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const QMatrix a = test::random_matrix(3, 3, 60 + s);
      const auto [a1, a2] = real_reps(a);
      const double d1 = determinant(a1), d2 = determinant(a2), q = qdet(a);
      CHECK(rel_close(d1, d2, 1e-10));
      CHECK(rel_close(q * q, d1, 1e-10));
    }
  }
}

TEST_CASE("qdet") {
  CHECK(qdet(QMatrix::identity(3)) == Approx(1.0));
  CHECK(qdet(QMatrix{{Quaternion::j()}}) == Approx(1.0));
  CHECK_THROWS_AS(qdet(QMatrix(2, 3)), std::invalid_argument);
  for (std::uint64_t s = 0; s < 5; ++s) CHECK(qdet(test::random_matrix(3, 3, 80 + s)) >= 0.0);
}

TEST_CASE("hermitian eigenvalues") {
  const std::vector<double> d{3.0, 1.0};
  const Spectrum s = hermitian_eigenvalues(QMatrix::diagonal(d));
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == Approx(3.0));
  CHECK(s.values[1] == Approx(1.0));
  CHECK(s.pairing_residual == Approx(0.0).margin(1e-14));

  const Quaternion j = Quaternion::j();
  const Spectrum sj = hermitian_eigenvalues(QMatrix{{1.0, j}, {-j, 1.0}});
  CHECK(sj.values[0] == Approx(2.0));
  CHECK(sj.values[1] == Approx(0.0).margin(1e-13));

  CHECK_THROWS_AS(hermitian_eigenvalues(QMatrix{{1.0, j}, {j, 1.0}}), DomainError);

  SECTION("pairing in the complex representation") {
    for (std::uint64_t s2 = 0; s2 < 5; ++s2) {
      const QMatrix h = test::random_hermitian(4, 200 + s2);
      CHECK(hermitian_eigenvalues(h).pairing_residual <= 1e-10 * frobenius_norm(h));
    }
  }

  SECTION("unitary similarity invariance") {
    RngStream rng(5, 1);
    for (std::uint64_t s2 = 0; s2 < 10; ++s2) {
      const QMatrix a = test::random_hermitian(3, 300 + s2);
      const QMatrix h = sample_haar_unitary(3, rng);
      QMatrix b = h * a * conj_transpose(h);
      for (std::size_t i = 0; i < 3; ++i) {
        b(i, i) = Quaternion{b(i, i).w};
        for (std::size_t k = i + 1; k < 3; ++k) b(k, i) = b(i, k).conj();
      }
      const auto ea = hermitian_eigenvalues(a).values, eb = hermitian_eigenvalues(b).values;
      for (std::size_t i = 0; i < 3; ++i) CHECK(rel_close(ea[i], eb[i], 1e-8, 1e-12 * frobenius_norm(a)));
    }
  }
}

TEST_CASE("moore determinant and cholesky") {
  CHECK(moore_det(QMatrix::identity(3)) == Approx(1.0));
  const std::vector<double> d{2.0, 3.0};
  CHECK(moore_det(QMatrix::diagonal(d)) == Approx(6.0));

  const std::vector<double> sq{4.0, 9.0};
  const QMatrix t = cholesky(QMatrix::diagonal(sq));
  CHECK(t(0, 0).w == Approx(2.0));
  CHECK(t(1, 1).w == Approx(3.0));
  CHECK(frobenius_norm(cholesky(QMatrix::identity(3)) - QMatrix::identity(3)) == 0.0);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const QMatrix a = test::random_positive_definite(3, 400 + s);
    const double md = moore_det(a);
    CHECK(rel_close(md * md, qdet(a), 1e-10));
    const QMatrix tt = cholesky(a);
    double prod = 1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(tt(i, i).w > 0.0);
      CHECK(tt(i, i).x == 0.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(tt(i, j).norm() == 0.0);
      prod *= tt(i, i).w * tt(i, i).w;
    }
    CHECK(rel_close(prod, md, 1e-9));
    CHECK(frobenius_norm(conj_transpose(tt) * tt - a) <= 1e-12 * frobenius_norm(a));
    CHECK(frobenius_norm(tt * upper_triangular_inverse(tt) - QMatrix::identity(3)) <= 1e-12);
  }
  CHECK_THROWS_AS(cholesky(QMatrix::diagonal(std::vector<double>{1.0, -1.0})), DomainError);
}

TEST_CASE("qr_unitary") {
  const QMatrix upper{{2.0, Quaternion{0.0, 1.0, 0.5, 0.0}}, {0.0, 3.0}};
  CHECK(frobenius_norm(qr_unitary(upper) - QMatrix::identity(2)) <= 1e-14);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const QMatrix a = test::random_matrix(4, 4, 500 + s);
    const QMatrix q = qr_unitary(a);
    CHECK(frobenius_norm(conj_transpose(q) * q - QMatrix::identity(4)) <= 1e-9);
    const QMatrix r = conj_transpose(q) * a;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(r(i, i).w > 0.0);
      CHECK(std::hypot(r(i, i).x, r(i, i).y, r(i, i).z) <= 1e-10 * frobenius_norm(a));
      for (std::size_t j = 0; j < i; ++j) CHECK(r(i, j).norm() <= 1e-10 * frobenius_norm(a));
    }
  }
}

TEST_CASE("relative eigenvalues match the eigenvalues of S^-1 D") {
  const QMatrix s = test::random_positive_definite(3, 600);
  const QMatrix d = test::random_positive_definite(3, 601);
  const auto rel = relative_eigenvalues(s, d).values;
  // the relative eigenvalues are the roots of det(D - t S) = 0
  for (double t : rel) CHECK(std::abs(qdet(d - s * t)) <= 1e-8 * qdet(d));
  const auto same_s = relative_eigenvalues(s, s).values;
  for (double v : same_s) CHECK(v == Approx(1.0).epsilon(1e-12));
}
