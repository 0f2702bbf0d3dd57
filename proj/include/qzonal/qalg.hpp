#pragma once

/**
 * @file qalg.hpp
 * @brief Quaternion matrix algebra: complex and real representations,
 * determinants, Hermitian spectra, Cholesky and QR factorizations.
 *
 * A quaternion matrix A = A1 + A2 i + A3 j + A4 k is written A = B1 + B2 j with
 * B1 = A1 + A2 i and B2 = A3 + A4 i. Its complex representation is the 2m x 2n
 * block matrix [[B1, -B2], [conj(B2), conj(B1)]], which is multiplicative and
 * maps A^H to the conjugate transpose. Eigenvalues of a Hermitian A are the
 * eigenvalues of that representation, each appearing twice.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qzonal/errors.hpp"
#include "qzonal/quaternion.hpp"

namespace qzonal {

using Complex = std::complex<double>;

/// Minimal dense row-major matrix used for the complex and real representations.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_{rows}, cols_{cols}, data_(rows * cols, T{}) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const T> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = DenseMatrix<Complex>;
using RMatrix = DenseMatrix<double>;

template <class T>
DenseMatrix<T> operator*(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("DenseMatrix product: inner dimensions differ");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, l) * b(l, j);
  return c;
}

inline CMatrix adjoint(const CMatrix& a) {
  CMatrix h(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = std::conj(a(i, j));
  return h;
}

/// Determinant by LU factorization with partial pivoting. 0x0 gives 1.
template <class T>
T determinant(DenseMatrix<T> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix is not square");
  const std::size_t n = a.rows();
  T det{1};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == T{0}) return T{0};
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const T f = a(r, c) / a(c, c);
      if (f == T{0}) continue;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

/// Complex representation [[B1, -B2], [conj(B2), conj(B1)]].
inline CMatrix complex_rep(const QMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  CMatrix s(2 * m, 2 * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Quaternion& q = a(i, j);
      const Complex b1{q.w, q.x}, b2{q.y, q.z};
      s(i, j) = b1;
      s(i, j + n) = -b2;
      s(i + m, j) = std::conj(b2);
      s(i + m, j + n) = std::conj(b1);
    }
  return s;
}

/// The two 4m x 4n real representations of A, laid out block by block:
///   first  = [[ A1,  A2,  A3,  A4], [-A2,  A1, -A4,  A3], [-A3,  A4,  A1, -A2], [-A4, -A3,  A2,  A1]]
///   second = [[ A1, -A2, -A3, -A4], [ A2,  A1, -A4,  A3], [ A3,  A4,  A1, -A2], [ A4, -A3,  A2,  A1]]
inline std::pair<RMatrix, RMatrix> real_reps(const QMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  RMatrix r1(4 * m, 4 * n), r2(4 * m, 4 * n);
  // sign and component index of block (bi, bj); component 0..3 = A1..A4
  static constexpr int first_comp[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int first_sign[4][4] = {{1, 1, 1, 1}, {-1, 1, -1, 1}, {-1, 1, 1, -1}, {-1, -1, 1, 1}};
  static constexpr int second_sign[4][4] = {{1, -1, -1, -1}, {1, 1, -1, 1}, {1, 1, 1, -1}, {1, -1, 1, 1}};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Quaternion& q = a(i, j);
      const double comp[4] = {q.w, q.x, q.y, q.z};
      for (int bi = 0; bi < 4; ++bi)
        for (int bj = 0; bj < 4; ++bj) {
          const double v = comp[first_comp[bi][bj]];
          r1(bi * m + i, bj * n + j) = first_sign[bi][bj] * v;
          r2(bi * m + i, bj * n + j) = second_sign[bi][bj] * v;
        }
    }
  return {r1, r2};
}

/// q-determinant det(complex_rep(A)). The imaginary part must vanish up to
/// 1e-9 |det| (plus a rounding floor scaled by ||A||^{2m}).
inline double qdet(const QMatrix& a) {
  if (!a.square()) throw std::invalid_argument("qdet: matrix is not square");
  const Complex d = determinant(complex_rep(a));
  const double scale = std::pow(std::max(frobenius_norm(a), 1e-300), 2.0 * static_cast<double>(a.rows()));
  const double tol = 1e-9 * std::abs(d) + 1e-13 * scale;
  if (std::abs(d.imag()) > tol)
    throw NumericalError("qdet: residual imaginary part " + std::to_string(d.imag()) + " exceeds tolerance");
  return d.real();
}

/// Eigenvalues of a Hermitian quaternion matrix, descending.
struct Spectrum {
  std::vector<double> values;
  double pairing_residual = 0.0;
};

namespace detail {

/// Cyclic Jacobi eigenvalues of a complex Hermitian matrix (unsorted).
inline std::vector<double> jacobi_hermitian_eigenvalues(CMatrix a) {
  const std::size_t n = a.rows();
  double total = 0.0;
  for (const auto& v : a.data()) total += std::norm(v);
  const double threshold = 1e-13 * std::sqrt(total);
  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off_mass() >= threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const Complex phase = a(p, q) / r;  // a_pq = r e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * r);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = D P with D_qq = e^{-i phi}: J_pp = c, J_pq = s, J_qp = -s e^{-i phi}, J_qq = c e^{-i phi}
        const Complex jpp{c, 0.0}, jpq{s, 0.0};
        const Complex jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  return ev;
}

}  // namespace detail

/// Eigenvalues of a Hermitian quaternion matrix via its complex representation.
/// Throws DomainError if A is not Hermitian within 1e-10 ||A|| and
/// NumericalError if the doubled eigenvalues fail to pair within 1e-8 max(1, ||A||).
inline Spectrum hermitian_eigenvalues(const QMatrix& a) {
  if (!a.square()) throw DomainError("hermitian_eigenvalues: matrix is not square");
  const double norm = frobenius_norm(a);
  if (!is_hermitian(a, 1e-10 * norm)) throw DomainError("hermitian_eigenvalues: matrix is not Hermitian");
  std::vector<double> ev = detail::jacobi_hermitian_eigenvalues(complex_rep(a));
  std::sort(ev.begin(), ev.end(), std::greater<>());
  Spectrum s;
  s.values.resize(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    s.values[i] = 0.5 * (ev[2 * i] + ev[2 * i + 1]);
    s.pairing_residual = std::max(s.pairing_residual, ev[2 * i] - ev[2 * i + 1]);
  }
  if (s.pairing_residual > 1e-8 * std::max(1.0, norm))
    throw NumericalError("hermitian_eigenvalues: unpaired spectrum, residual " + std::to_string(s.pairing_residual));
  return s;
}

/// Moore determinant of a Hermitian matrix: the product of its eigenvalues.
inline double moore_det(const QMatrix& /*a*/, const Spectrum& spectrum) {
  double p = 1.0;
  for (double v : spectrum.values) p *= v;
  return p;
}

inline double moore_det(const QMatrix& a) { return moore_det(a, hermitian_eigenvalues(a)); }

/// Upper triangular T with positive real diagonal such that A = T^H T.
inline QMatrix cholesky(const QMatrix& a) {
  if (!a.square()) throw DomainError("cholesky: matrix is not square");
  const std::size_t n = a.rows();
  if (!is_hermitian(a, 1e-10 * frobenius_norm(a))) throw DomainError("cholesky: matrix is not Hermitian");
  QMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double pivot = a(i, i).w;
    for (std::size_t k = 0; k < i; ++k) pivot -= t(k, i).norm2();
    if (!(pivot > 0.0)) throw DomainError("cholesky: matrix is not positive definite");
    const double tii = std::sqrt(pivot);
    t(i, i) = tii;
    for (std::size_t j = i + 1; j < n; ++j) {
      Quaternion s = a(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= t(k, i).conj() * t(k, j);
      t(i, j) = s / tii;
    }
  }
  return t;
}

/// Inverse of an upper triangular quaternion matrix with invertible diagonal.
inline QMatrix upper_triangular_inverse(const QMatrix& t) {
  const std::size_t n = t.rows();
  QMatrix inv(n, n);
  // Solve T X = I column by column with back substitution; X is upper triangular.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t ii = c + 1; ii-- > 0;) {
      Quaternion s = (ii == c) ? Quaternion{1.0} : Quaternion{};
      for (std::size_t k = ii + 1; k <= c; ++k) s -= t(ii, k) * inv(k, c);
      inv(ii, c) = t(ii, ii).inverse() * s;
    }
  }
  return inv;
}

/// Q from A = Q R with R upper triangular with positive real diagonal
/// (modified Gram-Schmidt with one reorthogonalization pass).
inline QMatrix qr_unitary(const QMatrix& a) {
  if (!a.square()) throw DomainError("qr_unitary: matrix is not square");
  const std::size_t n = a.rows();
  const double tol_rank = 1e-12 * frobenius_norm(a);
  QMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Quaternion> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a(i, j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        Quaternion r;  // r = q_k^H v
        for (std::size_t i = 0; i < n; ++i) r += q(i, k).conj() * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= q(i, k) * r;
      }
    double nrm = 0.0;
    for (const auto& e : v) nrm += e.norm2();
    nrm = std::sqrt(nrm);
    if (!(nrm > tol_rank)) throw DomainError("qr_unitary: matrix is rank deficient");
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / nrm;
  }
  return q;
}

/// Eigenvalues of S^{-1} D for Hermitian positive definite S and Hermitian D,
/// computed from the Hermitian congruence T^{-H} D T^{-1} with S = T^H T.
inline Spectrum relative_eigenvalues(const QMatrix& s, const QMatrix& d) {
  const QMatrix tinv = upper_triangular_inverse(cholesky(s));
  QMatrix m = conj_transpose(tinv) * d * tinv;
  // symmetrize away rounding before the Hermitian solver sees it
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m(i, i) = Quaternion{m(i, i).w};
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const Quaternion avg = (m(i, j) + m(j, i).conj()) * 0.5;
      m(i, j) = avg;
      m(j, i) = avg.conj();
    }
  }
  return hermitian_eigenvalues(m);
}

}  // namespace qzonal
