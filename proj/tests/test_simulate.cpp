#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "levy/simulate.hpp"

using namespace levy;

namespace {

// tan(X_t / 2) = e^t tan(x / 2) for dX = sin X dt, x in (0, pi).
double tan_half_angle_flow(double t, double x) { return 2.0 * std::atan(std::exp(t) * std::tan(0.5 * x)); }

struct Stats {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;
};

template <class F>
Stats sample_stats(int n, F&& draw) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = draw(i);
    s += v;
    s2 += v * v;
  }
  Stats st;
  st.mean = s / n;
  st.var = (s2 - n * st.mean * st.mean) / (n - 1);
  st.se = std::sqrt(st.var / n);
  return st;
}

}  // namespace

TEST(SinFlow, Examples) {
  EXPECT_EQ(sin_flow(1.0, 0.0, 0.7), 0.7);
  EXPECT_NEAR(sin_flow(1.0, 1.0, std::numbers::pi / 2), 2.0 * std::atan(std::numbers::e), 1e-14);
  EXPECT_NEAR(sin_flow(1.0, 1.0, std::numbers::pi / 2), 2.43656, 1e-5);
  for (double t : {-3.0, 0.5, 40.0}) {
    EXPECT_EQ(sin_flow(2.0, t, std::numbers::pi / 2.0), std::numbers::pi / 2.0);
    EXPECT_EQ(sin_flow(1.0, t, 0.0), 0.0);
  }
  EXPECT_THROW(sin_flow(0.0, 1.0, 1.0), DomainError);
}

TEST(SinFlow, MatchesTanHalfAngleOracle) {
  for (double x = 0.05; x < std::numbers::pi; x += 0.05) {
    for (double t : {-5.0, -1.0, -0.1, 0.1, 1.0, 5.0}) {
      EXPECT_NEAR(sin_flow(1.0, t, x), tan_half_angle_flow(t, x), 1e-10) << x << " " << t;
    }
  }
}

TEST(SinFlow, PeriodicAndOddReduction) {
  const double a = 5.0;
  const double period = 2.0 * std::numbers::pi / a;
  for (double x : {0.1, 0.4, 0.6}) {
    for (double t : {-0.7, 0.3, 2.0}) {
      const double base = sin_flow(a, t, x);
      EXPECT_NEAR(sin_flow(a, t, x + 3.0 * period), base + 3.0 * period, 1e-10);
      EXPECT_NEAR(sin_flow(a, t, x - 2.0 * period), base - 2.0 * period, 1e-10);
      EXPECT_NEAR(sin_flow(a, t, -x), -base, 1e-12);
      // rescaling: flow of sin(aX) is flow of sin(Y) with Y = aX, time a t
      EXPECT_NEAR(a * base, tan_half_angle_flow(a * t, a * x), 1e-10);
    }
  }
}

TEST(SinFlow, SemigroupProperty) {
  for (double a : {1.0, 5.0}) {
    for (double x : {-2.0, 0.3, 1.0, 4.0}) {
      for (double s : {-0.4, 0.2, 0.7}) {
        for (double t : {-0.3, 0.5}) {
          EXPECT_NEAR(sin_flow(a, s + t, x), sin_flow(a, t, sin_flow(a, s, x)), 1e-10);
        }
      }
    }
  }
}

TEST(SinFlow, TimeDerivativeAtZero) {
  const double h = 1e-5;
  for (double a : {1.0, 5.0}) {
    for (double x : {-1.3, 0.2, 0.9, 2.5}) {
      const double fd = (sin_flow(a, h, x) - sin_flow(a, -h, x)) / (2.0 * h);
      EXPECT_NEAR(fd, std::sin(a * x), 1e-6);
    }
  }
}

TEST(SinFlow, LongTimesStayFinite) {
  EXPECT_NEAR(sin_flow(1.0, 1000.0, 0.5), std::numbers::pi, 1e-12);
  EXPECT_NEAR(sin_flow(1.0, -1000.0, 0.5), 0.0, 1e-12);
}

TEST(Rk4Flow, Examples) {
  const auto h = [](double x) { return std::sin(x); };
  EXPECT_EQ(rk4_flow(h, 0.0, 1.0, 0.4, 64), 0.4);
  EXPECT_NEAR(rk4_flow(h, 1.0, 1.0, std::numbers::pi / 2, 64), sin_flow(1.0, 1.0, std::numbers::pi / 2),
              1e-8);
  EXPECT_DOUBLE_EQ(rk4_flow([](double) { return 1.0; }, 0.5, 2.0, 1.0, 7), 2.0);
  EXPECT_THROW(rk4_flow(h, 1.0, 1.0, 0.0, 0), DomainError);
}

TEST(Rk4Flow, AgreesWithExactFlowAndSemigroup) {
  const double a = 5.0;
  const auto h = [a](double x) { return std::sin(a * x); };
  for (double x : {0.1, 1.0, 2.2}) {
    for (double rate : {-0.8, 0.3, 1.0}) {
      const double t = 0.6;
      EXPECT_NEAR(rk4_flow(h, rate, t, x, 64), sin_flow(a, rate * t, x), 1e-8);
      const double s = 0.25;
      EXPECT_NEAR(rk4_flow(h, rate, t, x, 64),
                  rk4_flow(h, rate, t - s, rk4_flow(h, rate, s, x, 64), 64), 1e-8);
    }
  }
}

TEST(SDEProblem, DriftFlowFallsBackToRk4) {
  auto p = make_sin_problem(1.0, 0.5, [](double x) { return x; });
  const double exact = p.drift_flow(0.7, 0.5, 1.3);
  p.flow.reset();
  EXPECT_NEAR(p.drift_flow(0.7, 0.5, 1.3), exact, 1e-9);
}

TEST(JumpSampler, AtomFrequencies) {
  FiniteActivityScheme s;
  s.kind = SchemeKind::three_moment;
  s.base = std::make_shared<const LevyMeasure1D>(make_truncated_stable(1.0, 1.0, 1.0));
  s.epsilon = 0.5;
  s.atoms = {{-0.4, 1.0}, {0.1, 2.5}, {0.3, 0.5}};
  s.tail_rate = 0.0;
  s.lambda_eps = 4.0;
  const JumpSampler sampler(s);
  RngStream rng(7, 0);
  const int n = 1'000'000;
  std::map<double, int> counts;
  for (int i = 0; i < n; ++i) ++counts[sample_scheme_jump(sampler, rng)];
  ASSERT_EQ(counts.size(), 3u);
  for (const auto& a : s.atoms) {
    const double p = a.rate / 4.0;
    const double se = std::sqrt(p * (1.0 - p) / n);
    EXPECT_NEAR(counts[a.location] / static_cast<double>(n), p, 3.0 * se);
  }
}

TEST(JumpSampler, SymmetricSchemeHasZeroMean) {
  const auto nu = make_nig({1.5, 0.0, 1.0});
  const JumpSampler sampler(build_three_moment(nu, 0.05));
  RngStream rng(8, 0);
  const auto st = sample_stats(1'000'000, [&](int) { return sampler.sample(rng); });
  EXPECT_NEAR(st.mean, 0.0, 3.0 * st.se);
}

TEST(JumpSampler, SecondMomentMatchesMeasure) {
  for (const auto& nu : {make_nig({2.0, 0.5, 0.7}), make_truncated_stable(1.0, 1.0, 1.0),
                         make_cgmy(1.0, 2.0, 3.0, 0.5)}) {
    const auto s = build_three_moment(nu, 0.05);
    const JumpSampler sampler(s);
    RngStream rng(9, 1);
    const auto st = sample_stats(1'000'000, [&](int) {
      const double j = sampler.sample(rng);
      return j * j;
    });
    EXPECT_NEAR(st.mean * s.lambda_eps, nu.moment(2), 3.0 * st.se * s.lambda_eps);
  }
}

TEST(JumpSampler, TailProbabilities) {
  const NigParams p{2.0, 0.5, 0.7};
  const auto nu = make_nig(p);
  const auto s = build_truncation(nu, 0.05);
  const JumpSampler sampler(s);
  RngStream rng(10, 0);
  const int n = 1'000'000;
  for (double r : {0.1, 0.5, 2.0}) {
    RngStream local = rng;
    int hits_plus = 0;
    int hits_minus = 0;
    for (int i = 0; i < n; ++i) {
      const double j = sampler.sample(local);
      hits_plus += j > r;
      hits_minus += j < -r;
    }
    for (auto [hits, side] : {std::pair{hits_plus, Side::plus}, std::pair{hits_minus, Side::minus}}) {
      const double q = nu.tail_mass(r, side) / s.lambda_eps;
      EXPECT_NEAR(hits / static_cast<double>(n), q, 3.5 * std::sqrt(q * (1.0 - q) / n)) << r;
    }
  }
}

TEST(JumpSampler, NeedsDensityForTail) {
  LevyMeasure1D::Parts parts;
  parts.closed_form = [](Side, int k, double lo, double hi) -> std::optional<double> {
    if (k != 0 || lo == 0.0) return std::nullopt;
    return 1.0 / lo - 1.0 / hi;
  };
  parts.support_radius = 1.0;
  const LevyMeasure1D nu(parts);
  FiniteActivityScheme s;
  s.base = std::make_shared<const LevyMeasure1D>(nu);
  s.epsilon = 0.5;
  s.tail_rate = 1.0;
  s.lambda_eps = 1.0;
  EXPECT_THROW(JumpSampler{s}, UnsupportedError);
}

TEST(JumpAdapted, FrozenAndNoJumpPaths) {
  const auto nu = make_cgmy(1.0, 2.0, 3.0, 0.5).with_gamma(0.4);
  const JumpSampler sampler(build_three_moment(nu, 0.2));
  const auto frozen = make_frozen_problem(1.25, [](double x) { return x; });
  for (std::uint64_t i = 0; i < 100; ++i) {
    RngStream rng(3, i);
    EXPECT_EQ(simulate_jump_adapted(frozen, sampler, rng).terminal, 1.25);
  }
  // find paths without jumps and compare with the pure drift flow
  const auto p = make_sin_problem(1.0, 0.8, [](double x) { return x; });
  const double gamma_eps = sampler.scheme().gamma_eps;
  int checked = 0;
  for (std::uint64_t i = 0; i < 20000 && checked < 3; ++i) {
    RngStream rng(4, i);
    const auto out = simulate_jump_adapted(p, sampler, rng);
    if (out.jumps == 0) {
      EXPECT_NEAR(out.terminal, sin_flow(1.0, gamma_eps, 0.8), 1e-14);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(JumpAdapted, AdditiveMeanAndJumpCount) {
  const auto nu = make_nig({2.0, 0.5, 0.7}).with_gamma(0.3);
  const auto s = build_three_moment(nu, 0.05);
  const JumpSampler sampler(s);
  const auto p = make_additive_problem(0.5, [](double x) { return x; });
  std::vector<double> jumps(1'000'000);
  const auto st = sample_stats(1'000'000, [&](int i) {
    RngStream rng(12, static_cast<std::uint64_t>(i));
    const auto out = simulate_jump_adapted(p, sampler, rng);
    jumps[i] = static_cast<double>(out.jumps);
    return out.terminal;
  });
  EXPECT_NEAR(st.mean, 0.5 + nu.mean(), 3.0 * st.se);
  EXPECT_NEAR(st.mean, 0.5 + s.gamma_eps + s.moment(1), 3.0 * st.se);
  const auto jc = sample_stats(100'000, [&](int i) { return jumps[i]; });
  EXPECT_NEAR(jc.mean, s.lambda_eps, 3.0 * jc.se);
}

TEST(JumpAdapted, GaussianSchemeVariance) {
  // h = 1: Var X_1 = lambda-weighted jump variance + Gaussian variance = int x^2 nu
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  const auto s = build_gaussian_compensation(nu, 0.1);
  const JumpSampler sampler(s);
  const auto p = make_additive_problem(0.0, [](double x) { return x; });
  const int n = 400'000;
  const auto st = sample_stats(n, [&](int i) {
    RngStream rng(13, static_cast<std::uint64_t>(i));
    return simulate_jump_adapted(p, sampler, rng).terminal;
  });
  const double var_se = st.var * std::sqrt(2.0 / n) * 2.0;  // loose, heavy-ish tails
  EXPECT_NEAR(st.var, nu.moment(2), 3.0 * var_se);
}

TEST(JumpAdapted, Reproducible) {
  const auto nu = make_nig({2.0, 0.5, 0.7});
  const JumpSampler sampler(build_three_moment(nu, 0.02));
  const auto p = make_sin_problem(5.0, 1.0, [](double x) { return x; });
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream a(77, i);
    RngStream b(77, i);
    EXPECT_EQ(simulate_jump_adapted(p, sampler, a).terminal,
              simulate_jump_adapted(p, sampler, b).terminal);
  }
}

TEST(JumpAdapted, NonFiniteStateIsPathFailure) {
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  const JumpSampler sampler(build_three_moment(nu, 0.1));
  SDEProblem p;
  p.h = [](double x) { return 1e300 * (1.0 + std::abs(x)); };
  p.flow = [](double, double x, double) { return x; };
  p.x0 = 1.0;
  RngStream rng(1, 0);
  EXPECT_THROW(simulate_jump_adapted(p, sampler, rng), PathFailure);
}

TEST(InverseGaussian, MeanVarianceAndSupport) {
  for (auto [mean, shape] : {std::pair{1.0, 1.0}, std::pair{0.05, 0.0025}, std::pair{3.0, 20.0}}) {
    RngStream rng(21, 0);
    const int n = 1'000'000;
    double s = 0.0, s2 = 0.0;
    bool positive = true;
    for (int i = 0; i < n; ++i) {
      const double x = sample_inverse_gaussian(mean, shape, rng);
      positive = positive && x > 0.0;
      s += x;
      s2 += x * x;
    }
    EXPECT_TRUE(positive);
    const double var = mean * mean * mean / shape;
    EXPECT_NEAR(s / n, mean, 3.0 * std::sqrt(var / n));
    // Var of (X - m)^2 for IG: mu4 - var^2 with mu4 = 15 m^7/l^3 + 3 var^2
    const double mu4 = 15.0 * std::pow(mean, 7) / std::pow(shape, 3) + 3.0 * var * var;
    const double emp_var = s2 / n - (s / n) * (s / n);
    EXPECT_NEAR(emp_var, var, 3.0 * std::sqrt((mu4 - var * var) / n));
  }
  RngStream rng(1, 1);
  EXPECT_THROW(sample_inverse_gaussian(0.0, 1.0, rng), DomainError);
}

TEST(Nig, CharacteristicFunctionOfSampler) {
  for (const NigParams p : {NigParams{2.0, 0.0, 1.0}, NigParams{3.0, 1.2, 0.8}}) {
    const double dt = 0.5;
    const int n = 1'000'000;
    std::vector<double> draws(n);
    RngStream rng(31, 0);
    for (auto& d : draws) d = sample_nig_increment(p, dt, rng);
    for (double u : {1.0, 2.0, 5.0}) {
      double c = 0.0, c2 = 0.0, s = 0.0, s2 = 0.0;
      for (double d : draws) {
        const double cu = std::cos(u * d);
        const double su = std::sin(u * d);
        c += cu;
        c2 += cu * cu;
        s += su;
        s2 += su * su;
      }
      c /= n;
      s /= n;
      const double se_c = std::sqrt((c2 / n - c * c) / n);
      const double se_s = std::sqrt((s2 / n - s * s) / n);
      const auto phi = nig_characteristic_function(p, dt, u) *
                       std::exp(std::complex<double>(0.0, u * p.mu_drift() * dt));
      EXPECT_NEAR(c, phi.real(), 3.0 * se_c) << u;
      EXPECT_NEAR(s, phi.imag(), 3.0 * se_s) << u;
    }
  }
}

TEST(Nig, IncrementMeanAndVariance) {
  for (const NigParams p : {NigParams{2.0, 0.0, 1.0}, NigParams{3.0, 1.2, 0.8}}) {
    const double dt = 0.25;
    RngStream rng(41, 0);
    const auto st = sample_stats(1'000'000, [&](int) { return sample_nig_increment(p, dt, rng); });
    EXPECT_NEAR(st.mean, 0.0, 3.0 * st.se);
    const double g = p.gamma_nig();
    const double var = p.delta * dt * p.alpha * p.alpha / (g * g * g);
    // fourth cumulant of NIG: 3 delta dt alpha^2 (alpha^2 + 4 beta^2) / gamma^7
    const double k4 = 3.0 * p.delta * dt * p.alpha * p.alpha *
                      (p.alpha * p.alpha + 4.0 * p.beta * p.beta) / std::pow(g, 7);
    const double var_se = std::sqrt((k4 + 2.0 * var * var) / 1e6);
    EXPECT_NEAR(st.var, var, 3.0 * var_se);
  }
}

TEST(Nig, CharacteristicFunctionMatchesLevyKhintchine) {
  // log phi_1(u) = i u gamma + int (e^{iux} - 1 - iux 1_{|x|<=1}) nu(dx)
  const NigParams p{2.0, 0.5, 0.7};
  const auto nu = make_nig(p);
  for (double u : {0.5, 1.5}) {
    double re = 0.0;
    double im = u * nu.gamma();
    for (double sgn : {1.0, -1.0}) {
      // x^2 nu(x) is bounded; divide the bracket by x^2 instead
      auto f_re = [&](double y) {
        const double x = sgn * y;
        return y < 1e-100 ? 0.0 : (std::cos(u * x) - 1.0) / (x * x) * nig_weighted_density(p, x);
      };
      auto f_im_in = [&](double y) {
        const double x = sgn * y;
        return y < 1e-100 ? 0.0 : (std::sin(u * x) - u * x) / (x * x) * nig_weighted_density(p, x);
      };
      auto f_im_out = [&](double y) { return std::sin(u * sgn * y) * nu.density(sgn * y); };
      re += quad::tanh_sinh(f_re, 0.0, 1.0) + quad::integrate_log(f_re, 1.0, 80.0);
      im += quad::tanh_sinh(f_im_in, 0.0, 1.0) + quad::integrate_log(f_im_out, 1.0, 80.0);
    }
    const auto lk = std::exp(std::complex<double>(re, im));
    const auto closed = nig_characteristic_function(p, 1.0, u) *
                        std::exp(std::complex<double>(0.0, u * p.mu_drift()));
    EXPECT_NEAR(lk.real(), closed.real(), 1e-8);
    EXPECT_NEAR(lk.imag(), closed.imag(), 1e-8);
  }
}

TEST(Euler, AdditiveAndFrozen) {
  const NigParams p{2.0, 0.5, 0.7};
  const auto inc = nig_increment_sampler(p);
  const auto add = make_additive_problem(0.3, [](double x) { return x; });
  for (int n_steps : {1, 4, 32}) {
    RngStream a(51, 9);
    RngStream b(51, 9);
    double z = 0.3;
    for (int i = 0; i < n_steps; ++i) z += inc(1.0 / n_steps, b);
    EXPECT_EQ(simulate_euler(add, inc, n_steps, a), z);
  }
  const auto frozen = make_frozen_problem(0.3, [](double x) { return x; });
  RngStream r(51, 10);
  EXPECT_EQ(simulate_euler(frozen, inc, 8, r), 0.3);
  EXPECT_THROW(simulate_euler(frozen, inc, 0, r), DomainError);
}

TEST(Euler, AdditiveDistributionIndependentOfSteps) {
  const NigParams p{2.0, 0.5, 0.7};
  const auto inc = nig_increment_sampler(p);
  const auto add = make_additive_problem(0.0, [](double x) { return x; });
  const double g = p.gamma_nig();
  const double var = p.delta * p.alpha * p.alpha / (g * g * g);
  for (int n_steps : {1, 16}) {
    const auto st = sample_stats(200'000, [&](int i) {
      RngStream rng(61, static_cast<std::uint64_t>(i));
      return simulate_euler(add, inc, n_steps, rng);
    });
    EXPECT_NEAR(st.mean, 0.0, 3.0 * st.se);
    EXPECT_NEAR(st.var / var, 1.0, 0.03);
  }
}
