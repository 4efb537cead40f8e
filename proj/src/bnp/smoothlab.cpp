// SPDX-License-Identifier: Apache-2.0
#include "bnp/smoothlab.hpp"

#include <cmath>

#include "bnp/common.hpp"
#include "bnp/specfun.hpp"

namespace bnp {

SmoothnessCase::SmoothnessCase(double lambda, const std::array<double, 4>& counts)
    : lambda_j(lambda), quad(counts) {
  if (!(lambda > 0.0)) throw InvalidArgument("smoothness case: lambda must be positive");
  for (double q : quad)
    if (!(q >= 0.0)) throw InvalidArgument("smoothness case: counts must be nonnegative");
  alpha = log_gamma(lambda) - 2.0 * log_gamma(lambda / 2.0);
  beta = log_gamma(lambda / 2.0) - 2.0 * log_gamma(lambda / 4.0);
}

double gamma_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("gamma_fn: arguments must be positive");
  return log_gamma(a + b) - log_gamma(a) - log_gamma(b);
}

double gamma_asymptote_residual(double a) {
  return gamma_fn(a, a) - 2.0 * std::log(2.0) * a;
}

double term_t(const SmoothnessCase& c) {
  const double l4 = c.lambda_j / 4.0;
  const double l2 = c.lambda_j / 2.0;
  const auto& q = c.quad;
  return gamma_fn(l4 + q[0], l4 + q[2]) + gamma_fn(l4 + q[1], l4 + q[3]) -
         gamma_fn(l2 + q[0] + q[1], l2 + q[2] + q[3]);
}

double case_delta(const std::vector<SmoothnessCase>& configs, int parent_count) {
  if (parent_count < 0 || parent_count > 62)
    throw InvalidArgument("case_delta: unsupported parent count");
  if (configs.size() != (std::size_t{1} << parent_count))
    throw InvalidArgument("case_delta: expected exactly 2^parent_count configurations");
  double delta = 0.0;
  for (const auto& c : configs) delta += c.alpha - 2.0 * c.beta + term_t(c);
  return delta;
}

std::array<double, 4> stationarity_residual(const SmoothnessCase& c) {
  const double l4 = c.lambda_j / 4.0;
  const double l2 = c.lambda_j / 2.0;
  const auto& q = c.quad;
  const double psi_total = digamma(c.lambda_j + c.total());
  const double psi_row[2] = {digamma(l2 + q[0] + q[1]), digamma(l2 + q[2] + q[3])};
  const double psi_col[2] = {digamma(l2 + q[0] + q[2]), digamma(l2 + q[1] + q[3])};
  std::array<double, 4> out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out[static_cast<std::size_t>(a * 2 + b)] =
          -digamma(l4 + q[static_cast<std::size_t>(a * 2 + b)]) + psi_row[a] + psi_col[b] -
          psi_total;
  return out;
}

std::array<double, 4> stationarity_system_residual(const SmoothnessCase& c) {
  const double l4 = c.lambda_j / 4.0;
  const double l2 = c.lambda_j / 2.0;
  const auto& q = c.quad;
  const double p00 = digamma(l4 + q[0]);
  const double p01 = digamma(l4 + q[1]);
  const double p10 = digamma(l4 + q[2]);
  const double p11 = digamma(l4 + q[3]);
  const double p_00_10 = digamma(l2 + q[0] + q[2]);
  const double p_01_11 = digamma(l2 + q[1] + q[3]);
  const double p_00_01 = digamma(l2 + q[0] + q[1]);
  const double p_10_11 = digamma(l2 + q[2] + q[3]);
  return {
      (p00 - p01) - (p_00_10 - p_01_11),
      (p00 - p10) - (p_00_01 - p_10_11),
      (p01 - p11) - (p_00_01 - p_10_11),
      (p10 - p11) - (p_00_10 - p_01_11),
  };
}

const char* to_string(SweepPattern p) {
  return p == SweepPattern::uniform ? "uniform" : "correspondence";
}

SweepPattern sweep_pattern_from_string(const std::string& s) {
  if (s == "uniform") return SweepPattern::uniform;
  if (s == "correspondence") return SweepPattern::correspondence;
  throw InvalidArgument("unknown sweep pattern '" + s + "' (expected uniform|correspondence)");
}

SweepFit lipschitz_sweep(SweepPattern pattern, double lambda, const std::vector<double>& n_grid) {
  if (n_grid.size() < 4) throw InvalidArgument("lipschitz_sweep: need at least 4 grid points");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > 0.0)) throw InvalidArgument("lipschitz_sweep: grid values must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw InvalidArgument("lipschitz_sweep: grid must be strictly increasing");
  }

  SweepFit fit;
  fit.points.reserve(n_grid.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double n : n_grid) {
    const std::array<double, 4> quad =
        pattern == SweepPattern::uniform ? std::array<double, 4>{n / 4, n / 4, n / 4, n / 4}
                                         : std::array<double, 4>{n / 2, 0, 0, n / 2};
    const double delta = case_delta({SmoothnessCase(lambda, quad)}, 0);
    fit.points.emplace_back(n, delta);
    const double x = std::log(n);
    const double y = std::abs(delta);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(n_grid.size());
  const double denom = count * sxx - sx * sx;
  fit.slope = (count * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / count;

  const double y_bar = sy / count;
  double ss_res = 0, ss_tot = 0;
  for (const auto& [n, delta] : fit.points) {
    const double y = std::abs(delta);
    const double pred = fit.slope * std::log(n) + fit.intercept;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - y_bar) * (y - y_bar);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace bnp
