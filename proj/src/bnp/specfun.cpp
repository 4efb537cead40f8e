// SPDX-License-Identifier: Apache-2.0
#include "bnp/specfun.hpp"

#include <cmath>

#include "bnp/common.hpp"

namespace bnp {

double log_gamma(double x) {
  if (!(x > 0.0)) throw InvalidArgument("log_gamma: argument must be positive");
  // std::lgamma is a Lanczos/Stirling-class approximation and comfortably
  // meets the 1e-12 relative contract on [1e-3, 1e9].
  return std::lgamma(x);
}

double digamma(double x) {
  if (!(x > 0.0)) throw InvalidArgument("digamma: argument must be positive");
  double result = 0.0;
  // Shift into the asymptotic regime: psi(x) = psi(x+1) - 1/x.
  while (x < 12.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Bernoulli series: psi(x) ~ ln x - 1/(2x) - sum B_2k / (2k x^2k).
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0 -
                  inv2 * (1.0 / 12.0)))))));
  return result + std::log(x) - 0.5 * inv - series;
}

}  // namespace bnp
