#pragma once

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <cmath>

namespace spinpulse::detail {

/// -2 * sum_{n >= first} (-1)^n B_{2n} lambda^{2n} / (2n)!, the tail of the
/// Taylor series of 2 - lambda cot(lambda/2). Converges for |lambda| < 2 pi;
/// used for lambda < 1 where the closed forms cancel catastrophically.
inline double cot_half_series_tail(double lambda, int first) {
  double sum = 0.0;
  for (int n = first; n < first + 24; ++n) {
    const double term = boost::math::bernoulli_b2n<double>(n) * std::pow(lambda, 2 * n) /
                        boost::math::factorial<double>(static_cast<unsigned>(2 * n));
    sum += (n % 2 == 0 ? 1.0 : -1.0) * term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return -2.0 * sum;
}

inline constexpr double kSeriesCrossover = 1.0;

}  // namespace spinpulse::detail
