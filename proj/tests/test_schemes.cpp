#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "levy/schemes.hpp"

using namespace levy;

namespace {

double oracle_quad(const std::function<double(double)>& f, double a, double b) {
  // tanh-sinh samples points within a few ulps of the endpoints
  auto g = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(g, a, b, 1e-14);
}

// int x^k nu(dx) over lo < |x| <= hi by independent quadrature of the density.
double oracle_moment(const LevyMeasure1D& nu, int k, double lo, double hi) {
  auto f = [&](double x) { return std::pow(x, k) * nu.density(x); };
  return oracle_quad(f, lo, hi) + oracle_quad(f, -hi, -lo);
}

// Same with |x|^k; scale for relative comparisons of odd moments.
double oracle_abs_moment(const LevyMeasure1D& nu, int k, double hi) {
  auto f = [&](double x) { return std::pow(std::abs(x), k) * nu.density(x); };
  return oracle_quad(f, 0.0, hi) + oracle_quad(f, -hi, 0.0);
}

std::vector<LevyMeasure1D> builtins() {
  return {make_truncated_stable(0.5, 1.0, 1.0), make_truncated_stable(1.0, 1.0, 1.0),
          make_truncated_stable(1.5, 0.7, 0.3), make_cgmy(1.0, 2.0, 3.0, 0.5),
          make_nig({2.0, 0.5, 0.7})};
}

}  // namespace

TEST(Truncation, StableExample) {
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  const auto s = build_truncation(nu, 0.1);
  EXPECT_TRUE(s.atoms.empty());
  EXPECT_NEAR(s.lambda_eps, 18.0, 1e-12);
  EXPECT_EQ(s.gamma_eps, nu.gamma());
  EXPECT_EQ(s.order, 0);
}

TEST(Truncation, SymmetricKeepsDrift) {
  const auto nu = make_nig({1.0, 0.0, 1.0}).with_gamma(0.3);
  EXPECT_NEAR(build_truncation(nu, 0.05).gamma_eps, 0.3, 1e-14);
}

TEST(Truncation, IntensityGrowsAsEpsilonShrinks) {
  for (const auto& nu : builtins()) {
    double prev = 0.0;
    for (double eps = 1.0; eps > 1e-4; eps *= 0.7) {
      const double l = build_truncation(nu, eps).lambda_eps;
      EXPECT_GE(l, prev);
      prev = l;
    }
  }
}

TEST(Truncation, RejectsLargeEpsilon) {
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  EXPECT_THROW(build_truncation(nu, 1.5), UnsupportedError);
  EXPECT_THROW(build_truncation(nu, 0.0), DomainError);
}

TEST(Gaussian, VarianceAndDrift) {
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  const auto s = build_gaussian_compensation(nu, 0.1);
  EXPECT_NEAR(s.gauss_sigma2, 0.2, 1e-14);
  EXPECT_EQ(s.gamma_eps, build_truncation(nu, 0.1).gamma_eps);
  const auto cg = make_cgmy(1.0, 2.0, 3.0, 0.5);
  EXPECT_EQ(build_gaussian_compensation(cg, 0.1).gamma_eps, build_truncation(cg, 0.1).gamma_eps);
}

TEST(ThreeMoment, StableExample) {
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  const auto s = build_three_moment(nu, 0.1);
  ASSERT_EQ(s.atoms.size(), 2u);
  EXPECT_NEAR(s.atoms[0].location, -0.1, 0.0);
  EXPECT_NEAR(s.atoms[1].location, 0.1, 0.0);
  EXPECT_NEAR(s.atoms[0].rate, 10.0, 1e-12);
  EXPECT_NEAR(s.atoms[1].rate, 10.0, 1e-12);
  EXPECT_NEAR(s.lambda_eps, 38.0, 1e-12);
}

TEST(ThreeMoment, SymmetricRates) {
  const auto nu = make_nig({1.5, 0.0, 1.0});
  const double eps = 0.03;
  const auto s = build_three_moment(nu, eps);
  const double expected = nu.partial_moment(2, eps) / (2.0 * eps * eps);
  EXPECT_NEAR(s.atoms[0].rate, expected, 1e-12 * expected);
  EXPECT_NEAR(s.atoms[1].rate, expected, 1e-12 * expected);
}

TEST(ThreeMoment, IntensityIdentity) {
  for (const auto& nu : builtins()) {
    for (double eps : {0.5, 0.1, 1e-3}) {
      const auto s = build_three_moment(nu, eps);
      const double expected = nu.tail_mass(eps) + nu.partial_moment(2, eps) / (eps * eps);
      EXPECT_NEAR(s.lambda_eps / expected, 1.0, 1e-12);
      EXPECT_NEAR(s.lambda_eps / (s.tail_rate + s.atom_rate_sum()), 1.0, 1e-12);
    }
  }
}

TEST(ThreeMoment, IntensityAsymptote) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto nu = make_truncated_stable(alpha, 1.0, 1.0);
    const double eps = 1e-5;
    const double ratio = build_three_moment(nu, eps).lambda_eps * std::pow(eps, alpha) / 2.0;
    EXPECT_NEAR(ratio / (2.0 / (2.0 - alpha)), 1.0, 0.01) << alpha;
  }
}

TEST(ThreeMoment, MatchesMomentsAgainstQuadrature) {
  for (const auto& nu : builtins()) {
    const double eps = 0.05;
    const auto s = build_three_moment(nu, eps);
    const double hi = std::min(nu.support_radius(), 60.0);
    for (int k : {2, 3}) {
      const double target = oracle_moment(nu, k, 0.0, hi);
      EXPECT_NEAR(s.moment(k), target, 1e-8 * oracle_abs_moment(nu, k, hi)) << "k " << k;
    }
    for (const auto& a : s.atoms) {
      EXPECT_GT(a.rate, 0.0);
      EXPECT_LE(std::abs(a.location), eps);
    }
    EXPECT_LT(max_moment_mismatch(s), 1e-8);
  }
}

TEST(CompensatedDrift, NigAgainstQuadrature) {
  const NigParams p{1.0, 0.5, 1.0};
  const auto nu = make_nig(p);
  const double eps = 0.01;
  for (const auto& s : {build_truncation(nu, eps), build_three_moment(nu, eps)}) {
    double atom_mean = 0.0;
    for (const auto& a : s.atoms) atom_mean += a.location * a.rate;
    const double expected = nu.gamma() - atom_mean - oracle_moment(nu, 1, eps, 1.0);
    EXPECT_NEAR(s.gamma_eps, expected, 1e-10);
  }
}

TEST(CompensatedDrift, PreservesMean) {
  for (const auto& nu : builtins()) {
    const auto s = build_three_moment(nu, 0.05);
    EXPECT_NEAR(s.gamma_eps + s.moment(1), nu.mean(), 1e-12);
  }
}

TEST(ErrorMoment, TruncationIsPartialMoment) {
  const auto nu = make_nig({2.0, 0.5, 0.7});
  const auto s = build_truncation(nu, 0.1);
  const double expected = nu.side_integral(Side::plus, 4, 0.0, 0.1) +
                          nu.side_integral(Side::minus, 4, 0.0, 0.1);
  EXPECT_NEAR(error_moment(s, 4), expected, 1e-15);
  EXPECT_NEAR(error_moment(s, 4), nu.partial_moment(4, 0.1), 1e-15);
}

TEST(ErrorMoment, ThreeMomentExample) {
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  const auto s = build_three_moment(nu, 0.1);
  const double expected = 2.0 * 1e-3 / 3.0 + 0.01 * 0.2;
  EXPECT_NEAR(error_moment(s, 4), expected, 1e-15);
  EXPECT_NEAR(error_moment(s, 4), 0.0026667, 1e-7);
  EXPECT_THROW(error_moment(s, 1), DomainError);
}

TEST(HighOrder, MinimalSymmetricCase) {
  const auto nu = make_truncated_stable(1.0, 1.0, 1.0);
  const auto s = build_high_order(nu, 0.1, 1);
  ASSERT_EQ(s.atoms.size(), 2u);
  EXPECT_NEAR(s.atoms[0].location, -s.atoms[1].location, 1e-15);
  EXPECT_EQ(s.order, 3);
  EXPECT_LT(max_moment_mismatch(s), 1e-12);
}

TEST(HighOrder, MatchesMomentsAgainstQuadrature) {
  for (const auto& nu : builtins()) {
    const double eps = 0.05;
    const auto s = build_high_order(nu, eps, 3);
    ASSERT_EQ(s.atoms.size(), 4u);
    const double hi = std::min(nu.support_radius(), 60.0);
    for (int k = 2; k <= 5; ++k) {
      const double target = oracle_moment(nu, k, 0.0, hi);
      EXPECT_NEAR(s.moment(k), target, 1e-8 * oracle_abs_moment(nu, k, hi)) << "k " << k;
    }
    for (const auto& a : s.atoms) {
      EXPECT_GT(a.rate, 0.0);
      EXPECT_LE(std::abs(a.location), eps);
    }
  }
}

TEST(HighOrder, IntensityAndErrorAsymptotes) {
  const int n = 3;
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto nu = make_truncated_stable(alpha, 0.8, 1.2);
    const auto d = discrete_match(MuStar::from(*nu.stable_params()), n + 1);
    double sum_inv = 0.0;
    double sum_pow = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      sum_inv += d.weights[i] / (d.nodes[i] * d.nodes[i]);
      sum_pow += d.weights[i] * std::pow(std::abs(d.nodes[i]), n + 1);
    }
    const double eps = 1e-4;
    const auto s = build_high_order(nu, eps, n);
    const double lam_limit = 2.0 * (1.0 + alpha / (2.0 - alpha) * sum_inv);
    EXPECT_NEAR(s.lambda_eps * std::pow(eps, alpha) / lam_limit, 1.0, 0.02);
    const double err_limit = 2.0 * (alpha / (3.0 + n - alpha) + alpha / (2.0 - alpha) * sum_pow);
    EXPECT_NEAR(error_moment(s, n + 3) / std::pow(eps, n + 3 - alpha) / err_limit, 1.0, 0.02);
  }
}

TEST(HighOrder, NeedsStableLikeMeasure) {
  LevyMeasure1D::Parts parts;
  parts.atoms = {{0.5, 1.0}};
  const LevyMeasure1D nu(parts);
  EXPECT_THROW(build_high_order(nu, 0.1, 3), UnsupportedError);
  const auto st = make_truncated_stable(1.0, 1.0, 1.0);
  EXPECT_THROW(build_high_order(st, 0.1, -1), DomainError);
  EXPECT_THROW(build_high_order(st, 0.1, 2, discrete_match({1.0, 0.5}, 2)), DomainError);
}

TEST(HighOrder, EpsilonTooLarge) {
  const auto nu = make_cgmy(1.0, 0.1, 50.0, 0.5);
  EXPECT_THROW(build_high_order(nu, 0.5, 3), EpsilonTooLargeError);
  EXPECT_NO_THROW(build_high_order(nu, 1e-3, 3));
}

TEST(SchemeKind, StringRoundTrip) {
  for (auto k : {SchemeKind::truncation, SchemeKind::gaussian, SchemeKind::three_moment,
                 SchemeKind::high_order}) {
    EXPECT_EQ(scheme_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(scheme_kind_from_string("bogus"), DomainError);
}
