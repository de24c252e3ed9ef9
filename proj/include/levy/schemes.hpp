#pragma once

// Finite-activity approximations Z^eps of a pure-jump Levy process with
// triplet (0, nu, gamma). Every scheme keeps nu on {|x| > eps} and replaces
// the small jumps by
//   truncation         nothing (drift compensation only),
//   gaussian           a Brownian part with variance sigma_eps^2,
//   three_moment       atoms at +-eps matching moments 2 and 3,
//   high_order         atoms at eps * x_i matching moments 2 .. n+2.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "levy/errors.hpp"
#include "levy/levy_measure.hpp"
#include "levy/moment_match.hpp"

namespace levy {

enum class SchemeKind { truncation, gaussian, three_moment, high_order };

inline std::string_view to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::truncation: return "truncation";
    case SchemeKind::gaussian: return "gaussian";
    case SchemeKind::three_moment: return "three_moment";
    case SchemeKind::high_order: return "high_order";
  }
  return "unknown";
}

inline SchemeKind scheme_kind_from_string(std::string_view s) {
  if (s == "truncation") return SchemeKind::truncation;
  if (s == "gaussian") return SchemeKind::gaussian;
  if (s == "three_moment") return SchemeKind::three_moment;
  if (s == "high_order") return SchemeKind::high_order;
  throw DomainError("unknown scheme kind: " + std::string(s));
}

struct SchemeAtom {
  double location;
  double rate;
};

/// The approximating triplet (0, nu_eps, gamma_eps) plus an optional
/// Brownian variance for the Gaussian-compensation baseline.
struct FiniteActivityScheme {
  SchemeKind kind = SchemeKind::truncation;
  std::shared_ptr<const LevyMeasure1D> base;
  double epsilon = 1.0;
  std::vector<SchemeAtom> atoms;
  double tail_rate = 0.0;
  double gamma_eps = 0.0;
  double lambda_eps = 0.0;
  double gauss_sigma2 = 0.0;
  int order = 0;
  /// Nodes of the matched discrete measure (high-order scheme only).
  std::optional<DiscreteMeasure> nodes;

  [[nodiscard]] const LevyMeasure1D& measure() const { return *base; }

  /// int x^k nu_eps(dx); k = 0 gives lambda_eps.
  [[nodiscard]] double moment(int k) const {
    CompensatedSum s;
    s += base->tail_moment(k, epsilon);
    for (const auto& a : atoms) s += a.rate * std::pow(a.location, k);
    return s.value();
  }

  [[nodiscard]] double atom_rate_sum() const {
    CompensatedSum s;
    for (const auto& a : atoms) s += a.rate;
    return s.value();
  }
};

/// gamma - sum_{|x_i|<=1} x_i rate_i - int_{eps<|z|<=1} z nu(dz).
inline double compensated_drift(const LevyMeasure1D& nu, const std::vector<SchemeAtom>& atoms,
                                double eps, double gamma) {
  if (!(eps > 0.0 && eps <= 1.0)) throw UnsupportedError("compensated_drift: needs eps in (0,1]");
  CompensatedSum s;
  s += gamma;
  for (const auto& a : atoms) {
    if (std::abs(a.location) <= 1.0) s += -a.location * a.rate;
  }
  s += -nu.side_integral(Side::both, 1, eps, 1.0);
  return s.value();
}

namespace detail {

inline void check_eps(double eps) {
  if (!(eps > 0.0)) throw DomainError("scheme: epsilon must be positive");
  if (eps > 1.0) throw UnsupportedError("scheme: epsilon > 1 is not supported");
}

inline FiniteActivityScheme scheme_shell(const LevyMeasure1D& nu, double eps, SchemeKind kind) {
  check_eps(eps);
  FiniteActivityScheme s;
  s.kind = kind;
  s.base = std::make_shared<const LevyMeasure1D>(nu);
  s.epsilon = eps;
  s.tail_rate = nu.tail_mass(eps, Side::both);
  return s;
}

inline void finish(FiniteActivityScheme& s) {
  s.gamma_eps = compensated_drift(*s.base, s.atoms, s.epsilon, s.base->gamma());
  s.lambda_eps = s.tail_rate + s.atom_rate_sum();
}

}  // namespace detail

/// Small jumps replaced by their expectation.
inline FiniteActivityScheme build_truncation(const LevyMeasure1D& nu, double eps) {
  auto s = detail::scheme_shell(nu, eps, SchemeKind::truncation);
  detail::finish(s);
  return s;
}

/// Truncation plus a Brownian motion with the variance of the small jumps.
inline FiniteActivityScheme build_gaussian_compensation(const LevyMeasure1D& nu, double eps) {
  auto s = detail::scheme_shell(nu, eps, SchemeKind::gaussian);
  s.gauss_sigma2 = nu.partial_moment(2, eps);
  detail::finish(s);
  return s;
}

/// Atoms at +-eps with rates lambda_pm = (sigma_eps^2 / eps^2 +- m3_eps / eps^3) / 2.
inline FiniteActivityScheme build_three_moment(const LevyMeasure1D& nu, double eps) {
  auto s = detail::scheme_shell(nu, eps, SchemeKind::three_moment);
  const double m2 = nu.partial_moment(2, eps);
  const double m3 = nu.partial_moment(3, eps);
  const double a2 = m2 / (eps * eps);
  const double a3 = m3 / (eps * eps * eps);
  const double lambda_plus = 0.5 * (a2 + a3);
  const double lambda_minus = 0.5 * (a2 - a3);
  if (lambda_plus < 0.0 || lambda_minus < 0.0) {
    throw NumericalError("build_three_moment: negative atom rate (|m3| > eps * m2)");
  }
  if (lambda_minus > 0.0) s.atoms.push_back({-eps, lambda_minus});
  if (lambda_plus > 0.0) s.atoms.push_back({eps, lambda_plus});
  s.order = 3;
  detail::finish(s);
  return s;
}

/// Atoms eps * x_i with rates sigma_eps^2 a_i^eps / (x_i^2 eps^2); matches
/// moments 2 .. n+2. `nodes` must hold n+1 atoms.
inline FiniteActivityScheme build_high_order(const LevyMeasure1D& nu, double eps, int n,
                                             const DiscreteMeasure& nodes) {
  if (n < 0) throw DomainError("build_high_order: n must be >= 0");
  if (!nu.stable_params()) {
    throw UnsupportedError("build_high_order: measure must be stable-like (stable_params set)");
  }
  if (nodes.size() != static_cast<std::size_t>(n) + 1) {
    throw DomainError("build_high_order: need exactly n+1 nodes");
  }
  auto s = detail::scheme_shell(nu, eps, SchemeKind::high_order);
  const double sigma2 = nu.partial_moment(2, eps);
  const auto a = solve_atom_rates(nodes.nodes, nu, eps);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = nodes.nodes[i];
    s.atoms.push_back({eps * x, sigma2 * a[i] / (x * x * eps * eps)});
  }
  s.order = n + 2;
  s.nodes = nodes;
  detail::finish(s);
  return s;
}

/// High-order scheme with nodes from the (n+1)-point Gauss rule of mu*.
inline FiniteActivityScheme build_high_order(const LevyMeasure1D& nu, double eps, int n) {
  if (!nu.stable_params()) {
    throw UnsupportedError("build_high_order: measure must be stable-like (stable_params set)");
  }
  if (n < 0) throw DomainError("build_high_order: n must be >= 0");
  const auto nodes = discrete_match(MuStar::from(*nu.stable_params()), n + 1);
  return build_high_order(nu, eps, n, nodes);
}

/// int |x|^m |d nu - d nu_eps| = int_{|x|<=eps} |x|^m d nu + sum_i rate_i |x_i|^m.
/// Assumes nu has no atom on |x| = eps.
inline double error_moment(const FiniteActivityScheme& s, int m) {
  if (m < 2) throw DomainError("error_moment: m must be >= 2");
  const auto& nu = *s.base;
  CompensatedSum sum;
  sum += nu.side_integral(Side::plus, m, 0.0, s.epsilon);
  sum += std::abs(nu.side_integral(Side::minus, m, 0.0, s.epsilon));
  for (const auto& a : s.atoms) sum += a.rate * std::pow(std::abs(a.location), m);
  return sum.value();
}

/// int |x|^k nu(dx) over the whole line.
inline double absolute_moment(const LevyMeasure1D& nu, int k) {
  const double inf = std::numeric_limits<double>::infinity();
  return nu.side_integral(Side::plus, k, 0.0, 1.0) + nu.side_integral(Side::plus, k, 1.0, inf) +
         std::abs(nu.side_integral(Side::minus, k, 0.0, 1.0) +
                  nu.side_integral(Side::minus, k, 1.0, inf));
}

/// Relative mismatch |int x^k d nu_eps - int x^k d nu| / int |x|^k d nu.
inline double moment_mismatch(const FiniteActivityScheme& s, int k) {
  const double target = s.base->moment(k);
  return std::abs(s.moment(k) - target) / absolute_moment(*s.base, k);
}

/// Worst moment_mismatch over 2 <= k <= order; zero when nothing is matched.
inline double max_moment_mismatch(const FiniteActivityScheme& s) {
  double worst = 0.0;
  for (int k = 2; k <= s.order; ++k) worst = std::max(worst, moment_mismatch(s, k));
  return worst;
}

}  // namespace levy
