// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace bnp {

// ln Gamma(x) for x > 0. Accurate to better than 1e-12 relative over
// [1e-3, 1e9]. Throws InvalidArgument for x <= 0.
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x) for x > 0. Recurrence up to a threshold, then
// the Bernoulli asymptotic series; accurate to ~1e-12 for x >= 1e-3.
double digamma(double x);

}  // namespace bnp
