#pragma once

// One-dimensional Levy measures exposed through tail integrals, partial
// moments and densities. Built-ins: truncated stable-like, CGMY, NIG.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "levy/errors.hpp"
#include "levy/quadrature.hpp"
#include "levy/specfun.hpp"

namespace levy {

enum class Side { plus, minus, both };

/// Small-jump profile l(r) ~ (c_plus + c_minus) r^-alpha, split by sign.
struct StableParams {
  double alpha = 1.0;
  double c_plus = 1.0;
  double c_minus = 1.0;

  [[nodiscard]] double c_total() const { return c_plus + c_minus; }
  [[nodiscard]] double rho() const { return c_plus / (c_plus + c_minus); }
};

struct NigParams {
  double alpha = 1.0;
  double beta = 0.0;
  double delta = 1.0;

  void validate() const {
    if (!(alpha > 0.0)) throw DomainError("NIG: alpha must be positive");
    if (!(std::abs(beta) < alpha)) throw DomainError("NIG: require |beta| < alpha");
    if (!(delta > 0.0)) throw DomainError("NIG: delta must be positive");
  }
  [[nodiscard]] double gamma_nig() const { return std::sqrt(alpha * alpha - beta * beta); }
  /// Drift rate added to the NIG process so that E[Z_t] = 0.
  [[nodiscard]] double mu_drift() const { return -delta * beta / gamma_nig(); }

  /// Subordinated-Brownian-motion parametrization: Brownian volatility
  /// sigma, drift theta, subordinator variance rate kappa.
  static NigParams from_sigma_theta_kappa(double sigma, double theta, double kappa) {
    if (!(sigma > 0.0) || !(kappa > 0.0)) {
      throw DomainError("NIG: sigma and kappa must be positive");
    }
    NigParams p;
    p.beta = theta / (sigma * sigma);
    p.delta = sigma / std::sqrt(kappa);
    p.alpha = std::sqrt(p.beta * p.beta + 1.0 / (sigma * sigma * kappa));
    return p;
  }
};

/// nu(x) = delta alpha / pi * exp(beta x) K1(alpha |x|) / |x|.
inline double nig_density(const NigParams& p, double x) {
  if (x == 0.0) throw DomainError("nig_density: singular at x = 0");
  const double ax = std::abs(x);
  const double z = p.alpha * ax;
  const double expo = p.beta * x - z;
  if (expo < -745.0) return 0.0;
  return p.delta * p.alpha / std::numbers::pi * bessel_k_scaled(1, z) * std::exp(expo) / ax;
}

/// x^2 nu(x) for the NIG measure; bounded near 0 (tends to delta/pi).
inline double nig_weighted_density(const NigParams& p, double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return p.delta / std::numbers::pi;
  const double z = p.alpha * ax;
  const double expo = p.beta * x - z;
  if (expo < -745.0) return 0.0;
  return p.delta * p.alpha / std::numbers::pi * ax * bessel_k_scaled(1, z) * std::exp(expo);
}

struct TruncatedStableDesc {
  double alpha;
  double c_plus;
  double c_minus;
};
struct CgmyDesc {
  double C;
  double G;
  double M;
  double Y;
};
struct NigDesc {
  NigParams params;
};
struct CustomDesc {
  std::string name;
};
using MeasureDescriptor = std::variant<TruncatedStableDesc, CgmyDesc, NigDesc, CustomDesc>;

class LevyMeasure1D {
 public:
  /// x -> x^2 nu(x). Working with x^2 nu keeps integrands bounded near 0.
  using WeightedDensity = std::function<double(double)>;
  /// Closed form of the one-sided integral over lo < |x| <= hi of x^k nu(dx)
  /// (continuous part only); nullopt when not available for the arguments.
  using ClosedForm = std::function<std::optional<double>(Side, int, double, double)>;

  struct Atom {
    double location;
    double mass;
  };

  struct Parts {
    MeasureDescriptor descriptor = CustomDesc{"custom"};
    WeightedDensity weighted_density;
    ClosedForm closed_form;
    std::optional<StableParams> stable;
    double gamma = 0.0;
    double support_radius = std::numeric_limits<double>::infinity();
    std::vector<Atom> atoms;
    std::optional<double> total_mass;
  };

  explicit LevyMeasure1D(Parts parts) : p_(std::move(parts)) {
    if (!p_.weighted_density && !p_.closed_form && p_.atoms.empty()) {
      throw UnsupportedError("LevyMeasure1D: need a density, a closed form, or atoms");
    }
    for (const auto& a : p_.atoms) {
      if (a.location == 0.0 || !(a.mass > 0.0)) {
        throw DomainError("LevyMeasure1D: atoms need nonzero location and positive mass");
      }
    }
    if (p_.stable) {
      const auto& s = *p_.stable;
      if (!(s.alpha > 0.0 && s.alpha < 2.0) || s.c_plus < 0.0 || s.c_minus < 0.0 ||
          !(s.c_total() > 0.0)) {
        throw DomainError("LevyMeasure1D: invalid stable parameters");
      }
    }
  }

  [[nodiscard]] const MeasureDescriptor& descriptor() const { return p_.descriptor; }
  [[nodiscard]] const std::optional<StableParams>& stable_params() const { return p_.stable; }
  [[nodiscard]] double gamma() const { return p_.gamma; }
  /// Same measure with the triplet drift replaced.
  [[nodiscard]] LevyMeasure1D with_gamma(double gamma) const {
    Parts parts = p_;
    parts.gamma = gamma;
    return LevyMeasure1D(std::move(parts));
  }
  [[nodiscard]] double support_radius() const { return p_.support_radius; }
  [[nodiscard]] const std::vector<Atom>& atoms() const { return p_.atoms; }
  [[nodiscard]] bool has_density() const { return static_cast<bool>(p_.weighted_density); }
  [[nodiscard]] bool has_closed_form() const { return static_cast<bool>(p_.closed_form); }

  /// Total mass nu(R); infinite for stable-like measures.
  [[nodiscard]] double total_mass() const {
    if (p_.total_mass) return *p_.total_mass;
    if (p_.stable) return std::numeric_limits<double>::infinity();
    if (!p_.weighted_density && !p_.closed_form) {
      double s = 0.0;
      for (const auto& a : p_.atoms) s += a.mass;
      return s;
    }
    return std::numeric_limits<double>::infinity();
  }

  [[nodiscard]] double density(double x) const {
    if (x == 0.0) throw DomainError("density: undefined at x = 0");
    if (!p_.weighted_density) throw UnsupportedError("density: measure has no density");
    if (std::abs(x) > p_.support_radius) return 0.0;
    return p_.weighted_density(x) / (x * x);
  }

  [[nodiscard]] double weighted_density(double x) const {
    if (!p_.weighted_density) throw UnsupportedError("weighted_density: measure has no density");
    if (std::abs(x) > p_.support_radius) return 0.0;
    return p_.weighted_density(x);
  }

  /// One-sided integral over lo < |x| <= hi (x > 0 for plus, x < 0 for minus)
  /// of x^k nu(dx). hi may be +inf. Uses the closed form when present.
  [[nodiscard]] double side_integral(Side side, int k, double lo, double hi) const {
    if (side == Side::both) {
      return side_integral(Side::plus, k, lo, hi) + side_integral(Side::minus, k, lo, hi);
    }
    check_range(k, lo, hi);
    double cont = 0.0;
    std::optional<double> closed;
    if (p_.closed_form) closed = p_.closed_form(side, k, lo, hi);
    if (closed) {
      cont = *closed;
    } else if (p_.weighted_density) {
      cont = quadrature_side(side, k, lo, hi);
    } else if (p_.closed_form) {
      throw UnsupportedError("side_integral: no closed form for these arguments and no density");
    }
    return cont + atom_sum(side, k, lo, hi);
  }

  /// Same integral forced through quadrature of the density (ignores any
  /// closed form). Atoms are included.
  [[nodiscard]] double quadrature_side_integral(Side side, int k, double lo, double hi) const {
    if (side == Side::both) {
      return quadrature_side_integral(Side::plus, k, lo, hi) +
             quadrature_side_integral(Side::minus, k, lo, hi);
    }
    check_range(k, lo, hi);
    if (!p_.weighted_density) throw UnsupportedError("quadrature: measure has no density");
    return quadrature_side(side, k, lo, hi) + atom_sum(side, k, lo, hi);
  }

  /// nu((r, inf)), nu((-inf, -r)), or their sum.
  [[nodiscard]] double tail_mass(double r, Side side = Side::both) const {
    if (!(r > 0.0)) throw DomainError("tail_mass: r must be positive");
    return side_integral(side, 0, r, std::numeric_limits<double>::infinity());
  }

  /// Integral of x^k over |x| <= eps.
  [[nodiscard]] double partial_moment(int k, double eps) const {
    if (k < 2) throw DomainError("partial_moment: k must be >= 2");
    if (!(eps > 0.0)) throw DomainError("partial_moment: eps must be positive");
    return side_integral(Side::both, k, 0.0, eps);
  }

  [[nodiscard]] double partial_moment_quadrature(int k, double eps) const {
    if (k < 2) throw DomainError("partial_moment: k must be >= 2");
    if (!(eps > 0.0)) throw DomainError("partial_moment: eps must be positive");
    return quadrature_side_integral(Side::both, k, 0.0, eps);
  }

  /// Integral of x^k over |x| > r, k >= 0.
  [[nodiscard]] double tail_moment(int k, double r) const {
    if (!(r > 0.0)) throw DomainError("tail_moment: r must be positive");
    return side_integral(Side::both, k, r, std::numeric_limits<double>::infinity());
  }

  /// Full moment of order k >= 2.
  [[nodiscard]] double moment(int k) const { return partial_moment(k, 1.0) + tail_moment(k, 1.0); }

  /// nu({x : |x| = r}); nonzero only for measures with atoms.
  [[nodiscard]] double mass_at_radius(double r) const {
    double s = 0.0;
    for (const auto& a : p_.atoms) {
      if (std::abs(a.location) == r) s += a.mass;
    }
    return s;
  }

  /// Mean of Z_1 for the triplet (0, nu, gamma): gamma + int_{|x|>1} x nu(dx).
  [[nodiscard]] double mean() const { return p_.gamma + tail_moment(1, 1.0); }

 private:
  void check_range(int k, double lo, double hi) const {
    if (k < 0) throw DomainError("side_integral: k must be nonnegative");
    if (lo < 0.0 || !(hi >= lo)) throw DomainError("side_integral: need 0 <= lo <= hi");
    if (lo == 0.0 && k < 2) throw DomainError("side_integral: integral near 0 needs k >= 2");
  }

  [[nodiscard]] double atom_sum(Side side, int k, double lo, double hi) const {
    double s = 0.0;
    for (const auto& a : p_.atoms) {
      const bool on_side = side == Side::plus ? a.location > 0.0 : a.location < 0.0;
      const double r = std::abs(a.location);
      if (on_side && r > lo && r <= hi) s += a.mass * std::pow(a.location, k);
    }
    return s;
  }

  [[nodiscard]] double quadrature_side(Side side, int k, double lo, double hi) const {
    hi = std::min(hi, p_.support_radius);
    if (!(hi > lo)) return 0.0;
    const double sign = side == Side::plus ? 1.0 : -1.0;
    const double parity = (side == Side::minus && (k % 2 != 0)) ? -1.0 : 1.0;
    const auto& w = p_.weighted_density;
    // u^(k-2) * w(sign * u), u = |x|
    auto integrand = [&](double u) {
      const double wu = w(sign * u);
      return wu == 0.0 ? 0.0 : std::pow(u, k - 2) * wu;
    };
    double value = 0.0;
    if (lo == 0.0) {
      const double split = std::min(hi, 1.0);
      value = quad::tanh_sinh(integrand, 0.0, split);
      if (hi > split) value += quad::integrate_log(integrand, split, hi);
    } else {
      value = quad::integrate_log(integrand, lo, hi);
    }
    return parity * value;
  }

  Parts p_;
};

namespace detail {

// Lower incomplete gamma gamma(s, z) for s > 0 by its power series.
inline double lower_incomplete_gamma(double s, double z) {
  if (z <= 0.0) return 0.0;
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= z / (s + n);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(s * std::log(z) - z) * sum;
}

}  // namespace detail

/// nu(dx) = alpha c_pm |x|^(-1-alpha) on 0 < |x| <= 1. Exactly stable-like
/// near 0 with bounded support, so every moment is finite.
inline LevyMeasure1D make_truncated_stable(double alpha, double c_plus, double c_minus) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("truncated_stable: alpha in (0,2)");
  if (c_plus < 0.0 || c_minus < 0.0 || !(c_plus + c_minus > 0.0)) {
    throw DomainError("truncated_stable: c_plus, c_minus >= 0 with positive sum");
  }
  LevyMeasure1D::Parts parts;
  parts.descriptor = TruncatedStableDesc{alpha, c_plus, c_minus};
  parts.stable = StableParams{alpha, c_plus, c_minus};
  parts.support_radius = 1.0;
  parts.gamma = 0.0;
  parts.weighted_density = [=](double x) {
    const double ax = std::abs(x);
    if (ax > 1.0 || ax == 0.0) return 0.0;
    return alpha * (x > 0.0 ? c_plus : c_minus) * std::pow(ax, 1.0 - alpha);
  };
  parts.closed_form = [=](Side side, int k, double lo, double hi) -> std::optional<double> {
    const double c = side == Side::plus ? c_plus : c_minus;
    const double sgn = (side == Side::minus && (k % 2 != 0)) ? -1.0 : 1.0;
    hi = std::min(hi, 1.0);
    if (!(hi > lo)) return 0.0;
    const double p = k - alpha;
    double v = 0.0;
    if (lo == 0.0) {
      v = alpha * c * std::pow(hi, p) / p;
    } else if (std::abs(p) < 1e-15) {
      v = alpha * c * std::log(hi / lo);
    } else {
      v = alpha * c * (std::pow(hi, p) - std::pow(lo, p)) / p;
    }
    return sgn * v;
  };
  return LevyMeasure1D(std::move(parts));
}

/// CGMY (tempered stable): C e^{-M x} x^{-1-Y} for x > 0, C e^{-G|x|} |x|^{-1-Y}
/// for x < 0. gamma is set so that E[Z_1] = 0.
inline LevyMeasure1D make_cgmy(double C, double G, double M, double Y) {
  if (!(C > 0.0) || !(G > 0.0) || !(M > 0.0)) throw DomainError("cgmy: C, G, M must be positive");
  if (!(Y > 0.0 && Y < 2.0)) throw DomainError("cgmy: Y in (0,2)");
  LevyMeasure1D::Parts parts;
  parts.descriptor = CgmyDesc{C, G, M, Y};
  parts.stable = StableParams{Y, C / Y, C / Y};
  parts.weighted_density = [=](double x) {
    const double ax = std::abs(x);
    if (ax == 0.0) return 0.0;
    const double rate = x > 0.0 ? M : G;
    return C * std::pow(ax, 1.0 - Y) * std::exp(-rate * ax);
  };
  // Partial moments through the lower incomplete gamma function.
  parts.closed_form = [=](Side side, int k, double lo, double hi) -> std::optional<double> {
    if (lo != 0.0 || std::isinf(hi)) return std::nullopt;
    const double rate = side == Side::plus ? M : G;
    const double sgn = (side == Side::minus && (k % 2 != 0)) ? -1.0 : 1.0;
    const double s = k - Y;
    return sgn * C * std::pow(rate, -s) * detail::lower_incomplete_gamma(s, rate * hi);
  };
  LevyMeasure1D base(parts);
  parts.gamma = -base.tail_moment(1, 1.0);
  return LevyMeasure1D(std::move(parts));
}

/// NIG Levy measure; gamma chosen so that E[Z_1] = 0.
inline LevyMeasure1D make_nig(const NigParams& p) {
  p.validate();
  LevyMeasure1D::Parts parts;
  parts.descriptor = NigDesc{p};
  parts.stable = StableParams{1.0, p.delta / std::numbers::pi, p.delta / std::numbers::pi};
  parts.weighted_density = [p](double x) { return nig_weighted_density(p, x); };
  LevyMeasure1D base(parts);
  parts.gamma = -base.tail_moment(1, 1.0);
  return LevyMeasure1D(std::move(parts));
}

}  // namespace levy
