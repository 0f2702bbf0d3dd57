#pragma once

/**
 * @file quaternion.hpp
 * @brief Quaternion scalars and dense quaternion matrices.
 *
 * q = w + x i + y j + z k with i² = j² = k² = ijk = -1. Multiplication is
 * not commutative, so every matrix routine keeps the operand order explicit.
 */

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace qzonal {

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_) : w{w_} {}  // NOLINT: real scalars embed implicitly
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w{w_}, x{x_}, y{y_}, z{z_} {}

  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr bool operator==(const Quaternion&) const = default;

  constexpr Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  constexpr Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  // Hamilton product
  constexpr Quaternion operator*(const Quaternion& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
  constexpr Quaternion operator/(double s) const { return {w / s, x / s, y / s, z / s}; }

  Quaternion& operator+=(const Quaternion& o) { return *this = *this + o; }
  Quaternion& operator-=(const Quaternion& o) { return *this = *this - o; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  constexpr Quaternion inverse() const { return conj() / norm2(); }
};

constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }

/// Hamilton product as a free function.
constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) { return a * b; }

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ' ' << q.x << "i " << q.y << "j " << q.z << "k)";
}

/// Dense row-major quaternion matrix. Each entry stores its four real
/// coefficients contiguously.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_{rows}, cols_{cols}, data_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Quaternion>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("QMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static QMatrix diagonal(std::span<const double> d) {
    QMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Quaternion& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Quaternion& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Quaternion> data() const { return data_; }

  bool operator==(const QMatrix&) const = default;

  QMatrix& operator+=(const QMatrix& o) {
    check_same_shape(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
  }
  QMatrix& operator-=(const QMatrix& o) {
    check_same_shape(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
  }
  QMatrix& operator*=(double s) {
    for (auto& q : data_) q = q * s;
    return *this;
  }

  /// First `n` columns.
  QMatrix left_columns(std::size_t n) const {
    if (n > cols_) throw std::invalid_argument("QMatrix::left_columns: too many columns");
    QMatrix out(rows_, n);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = (*this)(i, j);
    return out;
  }

 private:
  void check_same_shape(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("QMatrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Quaternion> data_;
};

inline QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
inline QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
inline QMatrix operator*(QMatrix a, double s) { return a *= s; }
inline QMatrix operator*(double s, QMatrix a) { return a *= s; }

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("QMatrix product: inner dimensions differ");
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Quaternion ail = a(i, l);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  return c;
}

/// A^H = (conj(a_ji)).
inline QMatrix conj_transpose(const QMatrix& a) {
  QMatrix h(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = a(i, j).conj();
  return h;
}

inline double frobenius_norm(const QMatrix& a) {
  double s = 0.0;
  for (const auto& q : a.data()) s += q.norm2();
  return std::sqrt(s);
}

/// Trace of the real part.
inline double retr(const QMatrix& a) {
  if (!a.square()) throw std::invalid_argument("retr: matrix is not square");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i).w;
  return t;
}

/// Largest entrywise distance between A and A^H, compared against tol.
inline bool is_hermitian(const QMatrix& a, double tol) {
  if (!a.square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if ((a(i, j) - a(j, i).conj()).norm() > tol) return false;
  return true;
}

inline std::ostream& operator<<(std::ostream& os, const QMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) os << a(i, j) << (j + 1 < a.cols() ? " " : "");
    os << '\n';
  }
  return os;
}

}  // namespace qzonal
