#pragma once

#include <cmath>
#include <cstdint>

#include <catch2/catch_amalgamated.hpp>

#include "qzonal/mc.hpp"
#include "qzonal/quaternion.hpp"

namespace qzonal::test {

inline QMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  RngStream rng(seed, 7);
  return sample_qnormal(r, c, rng) * 2.0;
}

inline QMatrix random_hermitian(std::size_t m, std::uint64_t seed) {
  const QMatrix a = random_matrix(m, m, seed);
  QMatrix h = a + conj_transpose(a);
  for (std::size_t i = 0; i < m; ++i) {
    h(i, i) = Quaternion{h(i, i).w};
    for (std::size_t j = i + 1; j < m; ++j) h(j, i) = h(i, j).conj();
  }
  return h;
}

inline QMatrix random_positive_definite(std::size_t m, std::uint64_t seed) {
  const QMatrix x = random_matrix(m + 2, m, seed);
  QMatrix a = conj_transpose(x) * x + QMatrix::identity(m);
  for (std::size_t i = 0; i < m; ++i) {
    a(i, i) = Quaternion{a(i, i).w};
    for (std::size_t j = i + 1; j < m; ++j) a(j, i) = a(i, j).conj();
  }
  return a;
}

inline bool rel_close(double a, double b, double rtol, double atol = 0.0) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

}  // namespace qzonal::test
