#pragma once

// Deterministic error analytics: the optimal-truncation lower bound E_N over
// Levy measures of total mass <= N, the rate-optimality ratio of the
// 3-moment scheme, and its limiting constant.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "levy/errors.hpp"
#include "levy/levy_measure.hpp"
#include "levy/schemes.hpp"

namespace levy {

struct OptimalTruncation {
  double e_N = 0.0;
  double mu_N = 0.0;
  double value = 0.0;
  /// N reached the total mass of a finite-activity measure (e_N = 0 convention).
  bool saturated = false;
};

/// E_N = int_{|x|<e} x^4 nu(dx) + (1 - mu) e^4 nu({|x| = e}) where
/// nu({|x| > e}) + mu nu({|x| = e}) = N.
inline OptimalTruncation optimal_truncation_error(const LevyMeasure1D& nu, double n_mass) {
  if (!(n_mass > 0.0)) throw DomainError("optimal_truncation_error: N must be positive");
  OptimalTruncation out;
  if (n_mass >= nu.total_mass()) {
    out.saturated = true;
    return out;
  }
  auto tail = [&](double e) { return nu.tail_mass(e, Side::both); };
  double lo = 1e-12;
  double hi = 10.0;
  while (tail(lo) <= n_mass) {
    lo *= 1e-3;
    if (lo < 1e-300) throw NumericalError("optimal_truncation_error: cannot bracket e(N)");
  }
  while (tail(hi) > n_mass) {
    hi *= 10.0;
    if (hi > 1e300) throw NumericalError("optimal_truncation_error: cannot bracket e(N)");
  }
  // tail(lo) > N >= tail(hi); geometric bisection.
  while (hi / lo - 1.0 > 1e-13) {
    const double mid = std::sqrt(lo * hi);
    if (tail(mid) > n_mass) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double e = hi;
  double mass_at_e = 0.0;
  // An atom inside the final bracket carries the jump of the tail function.
  for (const auto& a : nu.atoms()) {
    const double r = std::abs(a.location);
    if (r >= lo && r <= hi) {
      e = r;
      mass_at_e = nu.mass_at_radius(r);
      break;
    }
  }
  double mu = 0.0;
  if (mass_at_e > 0.0) {
    mu = std::clamp((n_mass - tail(e)) / mass_at_e, 0.0, 1.0);
  }
  const double e4 = e * e * e * e;
  out.e_N = e;
  out.mu_N = mu;
  // partial_moment includes |x| = e; drop mu of that shell.
  out.value = std::max(0.0, nu.partial_moment(4, e) - mu * e4 * mass_at_e);
  return out;
}

/// (3 - alpha) (2 / (2 - alpha))^{4 / alpha}.
inline double optimality_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("optimality_constant: alpha in (0,2)");
  return (3.0 - alpha) * std::pow(2.0 / (2.0 - alpha), 4.0 / alpha);
}

/// Limit of e(eps)/eps for stable-like measures.
inline double truncation_ratio_limit(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("truncation_ratio_limit: alpha in (0,2)");
  return std::pow((2.0 - alpha) / 2.0, 1.0 / alpha);
}

/// Limit of lambda_eps eps^alpha / (c_+ + c_-) for the 3-moment scheme.
inline double intensity_limit(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("intensity_limit: alpha in (0,2)");
  return 2.0 / (2.0 - alpha);
}

struct OptimalityRow {
  double epsilon;
  double lambda_eps;
  double error_moment4;
  double e_N;
  double E_N;
  double ratio;
};

/// error_moment(3-moment scheme, 4) / E_{lambda_eps} on an epsilon grid.
inline std::vector<OptimalityRow> optimality_ratio(const LevyMeasure1D& nu,
                                                   const std::vector<double>& eps_grid) {
  if (!nu.stable_params()) throw UnsupportedError("optimality_ratio: measure must be stable-like");
  std::vector<OptimalityRow> rows;
  rows.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const auto s = build_three_moment(nu, eps);
    const double em4 = error_moment(s, 4);
    const auto opt = optimal_truncation_error(nu, s.lambda_eps);
    rows.push_back({eps, s.lambda_eps, em4, opt.e_N, opt.value, em4 / opt.value});
  }
  return rows;
}

inline void write_optimality_csv(std::ostream& os, const std::vector<OptimalityRow>& rows) {
  os << "epsilon,lambda_eps,error_moment4,E_N,ratio\n";
  const auto old_precision = os.precision(17);
  for (const auto& r : rows) {
    os << r.epsilon << ',' << r.lambda_eps << ',' << r.error_moment4 << ',' << r.E_N << ','
       << r.ratio << '\n';
  }
  os.precision(old_precision);
}

}  // namespace levy
