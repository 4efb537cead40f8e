// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

namespace bnp {

// One parent configuration of a binary child gaining a binary parent.
// quad = {N00, N01, N10, N11} with the first index the new parent's value
// and the second the child's value; entries are nonnegative reals so the
// derivative analysis can move off the integer lattice.
struct SmoothnessCase {
  double lambda_j = 1.0;
  std::array<double, 4> quad{0, 0, 0, 0};
  double alpha = 0.0;  // lnG(lambda) - 2 lnG(lambda/2)
  double beta = 0.0;   // lnG(lambda/2) - 2 lnG(lambda/4)

  SmoothnessCase(double lambda, const std::array<double, 4>& counts);

  double total() const { return quad[0] + quad[1] + quad[2] + quad[3]; }
  bool on_boundary() const {
    return quad[0] == 0 || quad[1] == 0 || quad[2] == 0 || quad[3] == 0;
  }
};

// gamma(a, b) = lnG(a+b) - lnG(a) - lnG(b) = -ln B(a, b); a, b > 0.
double gamma_fn(double a, double b);

// gamma(a, a) - (2 ln 2) a; grows like (ln a)/2 for large a.
double gamma_asymptote_residual(double a);

// The per-configuration score-difference term:
//   gamma(l/4+N00, l/4+N10) + gamma(l/4+N01, l/4+N11)
//   - gamma(l/2+N00+N01, l/2+N10+N11).
double term_t(const SmoothnessCase& c);

// Old-minus-new score change for adding the parent, summed over all 2^k
// configurations of the k existing parents: sum_j (alpha_j - 2 beta_j + t_j).
// Validates configs.size() == 2^parent_count. Equals -delta_log_bde of the
// corresponding edge addition on data realizing the quads.
double case_delta(const std::vector<SmoothnessCase>& configs, int parent_count);

// The four partial derivatives dt/dN_ab = -psi_ab + psi_row(a) + psi_col(b)
// - psi_total, digamma evaluated at the lambda-shifted arguments (which stay
// positive even at zero counts).
std::array<double, 4> stationarity_residual(const SmoothnessCase& c);

// Residuals (left minus right) of the pairwise-difference stationarity
// system obtained by subtracting pairs of the dt/dN = 0 equations:
//   psi_00 - psi_01 = psi_{00,10} - psi_{01,11}
//   psi_00 - psi_10 = psi_{00,01} - psi_{10,11}
//   psi_01 - psi_11 = psi_{00,01} - psi_{10,11}
//   psi_10 - psi_11 = psi_{00,10} - psi_{01,11}
// All four vanish identically at a uniform quad.
std::array<double, 4> stationarity_system_residual(const SmoothnessCase& c);

enum class SweepPattern { uniform, correspondence };

const char* to_string(SweepPattern p);
SweepPattern sweep_pattern_from_string(const std::string& s);

struct SweepFit {
  double slope = 0.0;      // fitted a in |delta| ~ a ln N + b
  double intercept = 0.0;  // fitted b
  double r2 = 0.0;
  std::vector<std::pair<double, double>> points;  // (N, signed delta)
};

// Evaluates case_delta for the single-configuration extremal pattern at each
// N (uniform: all cells N/4; correspondence: diagonal N/2) and least-squares
// fits |delta| against ln N. The fitted slope is the empirical smoothness
// coefficient.
SweepFit lipschitz_sweep(SweepPattern pattern, double lambda, const std::vector<double>& n_grid);

}  // namespace bnp
