#pragma once

/**
 * @file precision.hpp
 * @brief Working-precision tiers for series that cancel.
 *
 * A series is first summed in double together with a bound on the sum of
 * absolute term values. When the ratio bound/|value| shows that more digits
 * were lost than double can spare, the evaluation is repeated with an MPFR
 * type whose precision is fixed at compile time (so no global precision state
 * is touched and evaluations stay thread safe).
 */

#include <cmath>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "qzonal/errors.hpp"

namespace qzonal {

template <unsigned Digits>
using MpReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>,
                                             boost::multiprecision::et_off>;

using Mp50 = MpReal<50>;
using Mp100 = MpReal<100>;
using Mp200 = MpReal<200>;
using Mp400 = MpReal<400>;

template <class Real>
inline constexpr int decimal_digits = std::numeric_limits<Real>::digits10;

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

/// Outcome of one pass of a series evaluation in working type Real.
template <class Real>
struct Estimate {
  Real value{0};
  /// Sum of the absolute values of everything that was added (rounding scale).
  double magnitude = 0.0;
  int degree_used = 0;
  bool converged = true;
  double last_layer = 0.0;
};

/// Decimal digits lost to cancellation in an estimate.
template <class Real>
double digits_lost(const Estimate<Real>& e) {
  const double v = std::abs(to_double(e.value));
  if (e.magnitude == 0.0) return 0.0;
  if (v == 0.0 || !std::isfinite(v)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, std::log10(e.magnitude / v));
}

/// Runs pass.template operator()<Real>() in double and, if that loses more
/// than `spare` digits, in the smallest MPFR tier that keeps `keep` digits.
/// Returns the estimate converted to double.
template <class Pass>
Estimate<double> with_adaptive_precision(Pass&& pass, double keep = 14.0) {
  auto narrow = [](const auto& e) {
    return Estimate<double>{to_double(e.value), e.magnitude, e.degree_used, e.converged, e.last_layer};
  };
  Estimate<double> first = pass.template operator()<double>();
  double lost = digits_lost(first);
  if (lost + keep <= decimal_digits<double>) return first;

  bool exact_zero = false;
  auto attempt = [&]<class Real>() -> bool {
    if (std::isfinite(lost) && lost + keep + 3 > decimal_digits<Real>) return false;
    auto e = pass.template operator()<Real>();
    lost = digits_lost(e);
    exact_zero = e.value == 0;
    if (exact_zero) first = narrow(e);
    if (lost + keep > decimal_digits<Real>) return false;
    first = narrow(e);
    return true;
  };
  if (attempt.template operator()<Mp50>()) return first;
  if (attempt.template operator()<Mp100>()) return first;
  if (attempt.template operator()<Mp200>()) return first;
  if (attempt.template operator()<Mp400>()) return first;
  // a sum that still cancels to exactly zero at the widest tier is zero to
  // within magnitude * 1e-400
  if (exact_zero) return first;
  throw NumericalError("series cancellation exceeds the highest working precision (" + std::to_string(lost) +
                       " digits lost)");
}

}  // namespace qzonal
