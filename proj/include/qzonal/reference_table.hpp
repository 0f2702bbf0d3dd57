#pragma once

// Published coefficients c_{kappa,lambda} of M_lambda in C_kappa for k = 2..5,
// rows kappa and columns lambda in decreasing lex order (upper triangle incl. diagonal).

#include <stdexcept>
#include <string>
#include <vector>

#include "qzonal/partitions.hpp"

namespace qzonal {

inline std::vector<std::vector<std::string>> reference_rows(int k) {
  switch (k) {
    case 2:
      return {{"1", "4/3"}, {"2/3"}};
    case 3:
      return {{"1", "3/2", "2"}, {"3/2", "18/5"}, {"2/5"}};
    case 4:
      return {{"1", "8/5", "9/5", "12/5", "16/5"},
              {"12/5", "16/5", "104/15", "64/5"},
              {"1", "4/3", "16/5"},
              {"4/3", "32/7"},
              {"8/35"}};
    case 5:
      return {{"1", "5/3", "2", "8/3", "3", "4", "16/3"},
              {"10/3", "5", "220/21", "90/7", "160/7", "800/21"},
              {"3", "4", "26/3", "16", "32"},
              {"20/7", "80/21", "85/7", "200/7"},
              {"5/3", "4", "80/7"},
              {"1", "40/9"},
              {"8/63"}};
    default:
      throw std::invalid_argument("reference_rows: only k = 2..5 are tabulated");
  }
}

/// Reference entry by position in the decreasing lex enumeration of partitions of k.
inline BigRational reference_coefficient(int k, std::size_t kappa, std::size_t lambda) {
  if (lambda < kappa) return BigRational{0};
  return BigRational{reference_rows(k).at(kappa).at(lambda - kappa)};
}

}  // namespace qzonal
