#pragma once

// Double-exponential quadrature. tanh-sinh for finite intervals (tolerates
// integrable algebraic endpoint singularities), exp-sinh for [0, inf).
// Integrals over ranges spanning many decades go through a log substitution
// so the integrand is smooth on the transformed scale.

#include <cmath>
#include <limits>
#include <numbers>

#include "levy/errors.hpp"
#include "levy/specfun.hpp"

namespace levy::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int min_levels = 4;
  int max_levels = 10;
};

namespace detail {

inline void check_finite(double v) {
  if (!std::isfinite(v)) throw NumericalError("quadrature: non-finite integrand value");
}

inline bool converged(double prev, double cur, const Options& opt) {
  return std::abs(cur - prev) <= std::max(opt.rel_tol * std::abs(cur), opt.abs_tol);
}

}  // namespace detail

/// Integral of f over [a, b], a < b finite.
template <class F>
double tanh_sinh(F&& f, double a, double b, const Options& opt = {}) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    throw DomainError("tanh_sinh: require a <= b");
  }
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTMax = 6.5;
  const double hl = 0.5 * (b - a);

  // Sum of w(t) * (f(left) + f(right)) over the nodes t = k*h for the
  // requested parity of k (all k at level 0, odd k afterwards).
  auto level_sum = [&](double h, bool odd_only) {
    CompensatedSum s;
    const int step = odd_only ? 2 : 1;
    for (int k = 1;; k += step) {
      const double t = k * h;
      if (t > kTMax) break;
      const double sh = kHalfPi * std::sinh(t);
      if (sh > 350.0) break;
      const double ch = std::cosh(sh);
      const double c = 1.0 / (std::exp(sh) * ch);  // 1 - tanh(sh)
      const double off = hl * c;
      if (off == 0.0) break;
      const double w = kHalfPi * std::cosh(t) / (ch * ch);
      const double xl = a + off;
      const double xr = b - off;
      double term = 0.0;
      if (xl > a) {
        const double v = f(xl);
        detail::check_finite(v);
        term += v;
      }
      if (xr < b) {
        const double v = f(xr);
        detail::check_finite(v);
        term += v;
      }
      s += w * term;
    }
    return s.value();
  };

  const double mid = f(a + hl);
  detail::check_finite(mid);
  double h = 1.0;
  double total = kHalfPi * mid + level_sum(h, false);
  double estimate = hl * h * total;
  for (int level = 1; level <= opt.max_levels; ++level) {
    h *= 0.5;
    total += level_sum(h, true);
    const double next = hl * h * total;
    if (level >= opt.min_levels && detail::converged(estimate, next, opt)) return next;
    estimate = next;
  }
  return estimate;
}

/// Integral of f over [0, inf). f must decay; f may return 0 past overflow.
template <class F>
double exp_sinh(F&& f, const Options& opt = {}) {
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  auto node = [&](double t) {
    const double sh = kHalfPi * std::sinh(t);
    if (sh > 700.0 || sh < -700.0) return 0.0;
    const double v = std::exp(sh);
    if (v == 0.0) return 0.0;
    const double fv = f(v);
    detail::check_finite(fv);
    return fv * kHalfPi * std::cosh(t) * v;
  };
  auto level_sum = [&](double h, bool odd_only) {
    CompensatedSum s;
    const int step = odd_only ? 2 : 1;
    for (int k = 1;; k += step) {
      const double t = k * h;
      if (t > 6.5) break;
      s += node(t) + node(-t);
    }
    return s.value();
  };
  double h = 1.0;
  double total = node(0.0) + level_sum(h, false);
  double estimate = h * total;
  for (int level = 1; level <= opt.max_levels; ++level) {
    h *= 0.5;
    total += level_sum(h, true);
    const double next = h * total;
    if (level >= opt.min_levels && detail::converged(estimate, next, opt)) return next;
    estimate = next;
  }
  return estimate;
}

/// Integral of f over [lo, hi] with 0 < lo < hi <= inf, through x = lo * e^v.
template <class F>
double integrate_log(F&& f, double lo, double hi, const Options& opt = {}) {
  if (!(lo > 0.0)) throw DomainError("integrate_log: lower limit must be positive");
  if (!(hi > lo)) return 0.0;
  auto g = [&](double v) {
    const double x = lo * std::exp(v);
    if (!std::isfinite(x)) return 0.0;
    return f(x) * x;
  };
  if (std::isinf(hi)) return exp_sinh(g, opt);
  return tanh_sinh(g, 0.0, std::log(hi / lo), opt);
}

}  // namespace levy::quad
