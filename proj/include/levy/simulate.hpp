#pragma once

// Path simulation for dX = h(X-) dZ on [0, 1]:
//  * jump-adapted solution under a finite-activity scheme (drift flow
//    between the jump times, Euler update at each jump),
//  * constant-step Euler with exact increments of Z,
//  * inverse Gaussian and NIG increment samplers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "levy/errors.hpp"
#include "levy/levy_measure.hpp"
#include "levy/quadrature.hpp"
#include "levy/rng.hpp"
#include "levy/schemes.hpp"

namespace levy {

// ---------------------------------------------------------------------------
// Drift flows
// ---------------------------------------------------------------------------

/// Flow of dX = sin(aX) dt after time t (t may be negative).
///
/// Closed form: cos(a X_t) = (1 + cos(ax) - e^{2at}(1 - cos(ax))) /
/// (1 + cos(ax) + e^{2at}(1 - cos(ax))), evaluated as an atan2 of the
/// matching sine/cosine pair on the reduced angle so that it stays accurate
/// near the equilibria.
inline double sin_flow(double a, double t, double x) {
  if (!(a > 0.0)) throw DomainError("sin_flow: a must be positive");
  const double z = a * x;
  if (std::abs(std::sin(z)) < 1e-14) return x;
  // z = 2 pi k + r, r in (-pi, pi]
  const double two_pi = 2.0 * std::numbers::pi;
  const double k = std::floor((z + std::numbers::pi) / two_pi);
  double r = z - two_pi * k;
  if (r <= -std::numbers::pi) r += two_pi;
  const double sign = r < 0.0 ? -1.0 : 1.0;
  const double ar = std::abs(r);  // in (0, pi)
  // 1 + cos(ar) = 2 cos^2(ar/2), 1 - cos(ar) = 2 sin^2(ar/2)
  const double ch = std::cos(0.5 * ar);
  const double sh = std::sin(0.5 * ar);
  const double g = a * t;
  double theta = 0.0;
  if (g > 300.0) {
    // e^{at} tan(ar/2) overflows the pair below; the flow sits at pi to
    // double precision (distance ~ 2 e^{-at} / tan(ar/2)).
    theta = std::numbers::pi - 2.0 * std::exp(-g) * ch / sh;
  } else if (g < -300.0) {
    theta = 2.0 * std::exp(g) * sh / ch;
  } else {
    const double eg = std::exp(g);
    const double big_a = ch * ch;          // (1 + cos)/2
    const double big_b = eg * eg * sh * sh;  // e^{2at}(1 - cos)/2
    const double cos_part = big_a - big_b;
    const double sin_part = 2.0 * eg * ch * sh;
    theta = std::atan2(sin_part, cos_part);
  }
  return (two_pi * k + sign * theta) / a;
}

/// Classical RK4 for dX = h(X) rate dt over [0, t] with `substeps` steps.
inline double rk4_flow(const std::function<double(double)>& h, double rate, double t, double x,
                       int substeps) {
  if (substeps < 1) throw DomainError("rk4_flow: substeps must be >= 1");
  if (rate == 0.0 || t == 0.0) return x;
  const double dt = t / substeps;
  for (int i = 0; i < substeps; ++i) {
    const double k1 = rate * h(x);
    const double k2 = rate * h(x + 0.5 * dt * k1);
    const double k3 = rate * h(x + 0.5 * dt * k2);
    const double k4 = rate * h(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

/// dX_t = h(X_{t-}) dZ_t, X_0 = x0, evaluated through payoff(X_1).
struct SDEProblem {
  using Coefficient = std::function<double(double)>;
  /// (t, x, rate) -> state solving dX = h(X) rate dt from x after time t.
  using Flow = std::function<double(double, double, double)>;
  using Payoff = std::function<double(double)>;

  Coefficient h;
  std::optional<Flow> flow;
  double x0 = 0.0;
  Payoff payoff = [](double x) { return x; };
  int rk4_substeps = 64;

  [[nodiscard]] double drift_flow(double t, double x, double rate) const {
    if (flow) return (*flow)(t, x, rate);
    return rk4_flow(h, rate, t, x, rk4_substeps);
  }
};

/// dX = sin(aX) dZ with the exact drift flow.
inline SDEProblem make_sin_problem(double a, double x0, SDEProblem::Payoff payoff) {
  if (!(a > 0.0)) throw DomainError("sin problem: a must be positive");
  SDEProblem p;
  p.h = [a](double x) { return std::sin(a * x); };
  p.flow = [a](double t, double x, double rate) { return sin_flow(a, rate * t, x); };
  p.x0 = x0;
  p.payoff = std::move(payoff);
  return p;
}

/// h = 1: X_1 = x0 + Z_1.
inline SDEProblem make_additive_problem(double x0, SDEProblem::Payoff payoff) {
  SDEProblem p;
  p.h = [](double) { return 1.0; };
  p.flow = [](double t, double x, double rate) { return x + rate * t; };
  p.x0 = x0;
  p.payoff = std::move(payoff);
  return p;
}

/// h = 0: X stays at x0.
inline SDEProblem make_frozen_problem(double x0, SDEProblem::Payoff payoff) {
  SDEProblem p;
  p.h = [](double) { return 0.0; };
  p.flow = [](double, double x, double) { return x; };
  p.x0 = x0;
  p.payoff = std::move(payoff);
  return p;
}

// ---------------------------------------------------------------------------
// Jump sampling from the normalized scheme measure
// ---------------------------------------------------------------------------

/// Monotone piecewise-cubic (Fritsch-Butland) interpolant on increasing knots.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
      : x_(std::move(xs)), y_(std::move(ys)), d_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw DomainError("MonotoneCubic: need >= 2 matching knots");
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      if (!(h[i] > 0.0)) throw DomainError("MonotoneCubic: knots must increase strictly");
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  [[nodiscard]] double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * d_[i] +
           (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * d_[i + 1];
  }

 private:
  static double end_slope(double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) {
      d = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) {
      d = 3.0 * d0;
    }
    return d;
  }

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

/// Inverse of r -> nu_side((r, inf)) on [eps, R], tabulated on log-spaced
/// knots and interpolated monotonically in (log tail, log r).
class TailInverse {
 public:
  static constexpr std::size_t kKnots = 4096;
  static constexpr double kMassCutoff = 1e-12;

  TailInverse(const LevyMeasure1D& nu, Side side, double eps) : eps_(eps) {
    const double total = nu.tail_mass(eps, side);
    if (!(total > 0.0)) throw DomainError("TailInverse: empty tail");
    total_ = total;
    double r_max = nu.support_radius();
    if (std::isinf(r_max)) {
      r_max = std::max(1.0, 2.0 * eps);
      while (nu.tail_mass(r_max, side) > kMassCutoff * total && r_max < 1e12) r_max *= 2.0;
    }
    r_max_ = r_max;
    const double sgn = side == Side::plus ? 1.0 : -1.0;
    std::vector<double> r(kKnots);
    const double log_step = std::log(r_max / eps) / (kKnots - 1);
    for (std::size_t j = 0; j < kKnots; ++j) r[j] = eps * std::exp(log_step * j);
    r.back() = r_max;
    // Tail masses from the far end inwards.
    std::vector<double> tail(kKnots);
    tail.back() = std::isinf(nu.support_radius()) ? nu.tail_mass(r_max, side) : 0.0;
    quad::Options opt;
    opt.rel_tol = 1e-12;
    opt.min_levels = 3;
    CompensatedSum acc;
    acc += tail.back();
    for (std::size_t j = kKnots - 1; j-- > 0;) {
      const double seg = quad::tanh_sinh(
          [&](double u) { return nu.weighted_density(sgn * u) / (u * u); }, r[j], r[j + 1], opt);
      acc += seg;
      tail[j] = acc.value();
    }
    // Normalize so the table is consistent with the exact tail mass at eps.
    const double scale = total / tail[0];
    for (double& t : tail) t *= scale;

    // Keep knots with positive tail mass; interpolate log r against log T.
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t j = kKnots; j-- > 0;) {
      if (!(tail[j] > 0.0)) continue;
      const double lt = std::log(tail[j]);
      if (!xs.empty() && !(lt > xs.back())) continue;
      xs.push_back(lt);
      ys.push_back(std::log(r[j]));
    }
    log_tail_min_ = xs.front();
    r_last_ = std::exp(ys.front());
    interp_ = MonotoneCubic(std::move(xs), std::move(ys));
  }

  /// |x| > eps with P(|X| > r) = tail(r) / tail(eps), from u uniform on (0,1).
  [[nodiscard]] double sample(double u) const {
    const double lt = std::log(u * total_);
    if (lt <= log_tail_min_) {
      // Mass beyond the last tabulated knot (at most the 1e-12 cutoff).
      return r_last_;
    }
    return std::exp(interp_(lt));
  }

  [[nodiscard]] double total() const { return total_; }
  [[nodiscard]] double r_max() const { return r_max_; }

 private:
  double eps_;
  double total_ = 0.0;
  double r_max_ = 0.0;
  double r_last_ = 0.0;
  double log_tail_min_ = 0.0;
  MonotoneCubic interp_;
};

/// Draws jump sizes from nu_eps / lambda_eps.
class JumpSampler {
 public:
  explicit JumpSampler(FiniteActivityScheme scheme)
      : scheme_(std::make_shared<const FiniteActivityScheme>(std::move(scheme))) {
    const auto& s = *scheme_;
    if (!(s.lambda_eps > 0.0)) throw DomainError("JumpSampler: lambda_eps must be positive");
    CompensatedSum cum;
    for (const auto& a : s.atoms) {
      cum += a.rate;
      atom_cum_.push_back(cum.value());
    }
    if (s.tail_rate > 0.0) {
      const auto& nu = s.measure();
      tail_plus_ = nu.tail_mass(s.epsilon, Side::plus);
      tail_minus_ = nu.tail_mass(s.epsilon, Side::minus);
      if (const auto* ts = std::get_if<TruncatedStableDesc>(&nu.descriptor())) {
        exact_stable_ = *ts;
      } else {
        if (!nu.has_density()) {
          throw UnsupportedError("JumpSampler: tail sampling needs a density or closed-form tail");
        }
        if (tail_plus_ > 0.0) plus_ = std::make_shared<TailInverse>(nu, Side::plus, s.epsilon);
        if (tail_minus_ > 0.0) minus_ = std::make_shared<TailInverse>(nu, Side::minus, s.epsilon);
      }
    }
    total_ = cum.value() + tail_plus_ + tail_minus_;
  }

  [[nodiscard]] const FiniteActivityScheme& scheme() const { return *scheme_; }

  double sample(RngStream& rng) const {
    const double target = rng.uniform() * total_;
    const auto& atoms = scheme_->atoms;
    for (std::size_t i = 0; i < atom_cum_.size(); ++i) {
      if (target < atom_cum_[i]) return atoms[i].location;
    }
    const double atom_total = atom_cum_.empty() ? 0.0 : atom_cum_.back();
    if (target < atom_total + tail_plus_ || tail_minus_ == 0.0) {
      return sample_tail(Side::plus, rng.uniform());
    }
    return -sample_tail(Side::minus, rng.uniform());
  }

 private:
  [[nodiscard]] double sample_tail(Side side, double u) const {
    if (exact_stable_) {
      // tail(r) = c (r^-alpha - 1) on (0, 1]
      const auto& p = *exact_stable_;
      const double c = side == Side::plus ? p.c_plus : p.c_minus;
      const double tail = u * (side == Side::plus ? tail_plus_ : tail_minus_);
      return std::pow(tail / c + 1.0, -1.0 / p.alpha);
    }
    const auto& inv = side == Side::plus ? plus_ : minus_;
    return inv->sample(u);
  }

  std::shared_ptr<const FiniteActivityScheme> scheme_;
  std::vector<double> atom_cum_;
  double tail_plus_ = 0.0;
  double tail_minus_ = 0.0;
  double total_ = 0.0;
  std::optional<TruncatedStableDesc> exact_stable_;
  std::shared_ptr<const TailInverse> plus_;
  std::shared_ptr<const TailInverse> minus_;
};

inline double sample_scheme_jump(const JumpSampler& sampler, RngStream& rng) {
  return sampler.sample(rng);
}

// ---------------------------------------------------------------------------
// Path engines
// ---------------------------------------------------------------------------

struct PathOutcome {
  double terminal;
  std::size_t jumps;
};

namespace detail {
inline void check_state(double x) {
  if (!std::isfinite(x)) throw PathFailure("path produced a non-finite state");
}
}  // namespace detail

/// Jump-adapted solution of dX = h(X-) dZ^eps on [0, 1].
inline PathOutcome simulate_jump_adapted(const SDEProblem& p, const JumpSampler& sampler,
                                         RngStream& rng) {
  const auto& s = sampler.scheme();
  const std::uint64_t n_jumps = rng.poisson(s.lambda_eps);
  thread_local std::vector<double> times;
  times.resize(n_jumps);
  for (auto& t : times) t = rng.uniform();
  std::sort(times.begin(), times.end());

  const bool gaussian = s.kind == SchemeKind::gaussian && s.gauss_sigma2 > 0.0;
  double x = p.x0;
  double t_prev = 0.0;
  auto advance = [&](double dt) {
    x = p.drift_flow(dt, x, s.gamma_eps);
    if (gaussian) x += p.h(x) * std::sqrt(s.gauss_sigma2 * dt) * rng.normal();
  };
  for (double t : times) {
    advance(t - t_prev);
    x += p.h(x) * sampler.sample(rng);
    t_prev = t;
  }
  advance(1.0 - t_prev);
  detail::check_state(x);
  return {x, static_cast<std::size_t>(n_jumps)};
}

/// Increment sampler (dt, rng) -> Z_{t+dt} - Z_t.
using IncrementSampler = std::function<double(double, RngStream&)>;

/// Constant-step Euler scheme with exact increments of Z.
inline double simulate_euler(const SDEProblem& p, const IncrementSampler& increment, int n_steps,
                             RngStream& rng) {
  if (n_steps < 1) throw DomainError("simulate_euler: n_steps must be >= 1");
  const double dt = 1.0 / n_steps;
  double x = p.x0;
  for (int i = 0; i < n_steps; ++i) x += p.h(x) * increment(dt, rng);
  detail::check_state(x);
  return x;
}

// ---------------------------------------------------------------------------
// Inverse Gaussian / NIG
// ---------------------------------------------------------------------------

/// Inverse Gaussian IG(mean, shape) by the Michael-Schucany-Haas transform.
inline double sample_inverse_gaussian(double mean, double shape, RngStream& rng) {
  if (!(mean > 0.0) || !(shape > 0.0)) {
    throw DomainError("sample_inverse_gaussian: mean and shape must be positive");
  }
  const double nu = rng.normal();
  const double phi = mean * nu * nu / (2.0 * shape);
  // mean * (1 + phi - sqrt(phi^2 + 2 phi)), without cancellation
  const double x = mean / (1.0 + phi + std::sqrt(phi * phi + 2.0 * phi));
  if (rng.uniform() <= mean / (mean + x)) return x;
  return mean * mean / x;
}

/// One increment over dt of the NIG process plus drift mu_drift * dt:
/// beta I + sqrt(I) N with I ~ IG(delta dt / gamma, delta^2 dt^2).
inline double sample_nig_increment(const NigParams& p, double dt, RngStream& rng) {
  if (!(dt > 0.0)) throw DomainError("sample_nig_increment: dt must be positive");
  const double ig = sample_inverse_gaussian(p.delta * dt / p.gamma_nig(),
                                            p.delta * p.delta * dt * dt, rng);
  return p.mu_drift() * dt + p.beta * ig + std::sqrt(ig) * rng.normal();
}

/// E[exp(iu L_t)] for the NIG process L without the drift correction:
/// exp(-delta t (sqrt(alpha^2 - (beta + iu)^2) - sqrt(alpha^2 - beta^2))).
inline std::complex<double> nig_characteristic_function(const NigParams& p, double t, double u) {
  using C = std::complex<double>;
  const C bu(p.beta, u);
  const C root = std::sqrt(C(p.alpha * p.alpha) - bu * bu);
  return std::exp(-p.delta * t * (root - p.gamma_nig()));
}

inline IncrementSampler nig_increment_sampler(const NigParams& p) {
  return [p](double dt, RngStream& rng) { return sample_nig_increment(p, dt, rng); };
}

}  // namespace levy
