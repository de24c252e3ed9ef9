#include <gtest/gtest.h>

#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <vector>

#include "levy/rng.hpp"

using namespace levy;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 K{0xffffffffu, 0xffffffffu}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                 K{0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, ReproducibleAndStreamDependent) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  RngStream c(42, 8);
  RngStream d(43, 7);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same_c += x == c();
    same_d += x == d();
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
}

TEST(RngStream, FirstOutputIsPhiloxBlockZero) {
  RngStream r(0, 0);
  EXPECT_EQ(r(), (std::uint64_t{0x6627e8d5u} << 32) | 0xe169c58du);
  EXPECT_EQ(r(), (std::uint64_t{0xbc57ac4cu} << 32) | 0x9b00dbd8u);
}

TEST(RngStream, UniformIsOpenAndUnbiased) {
  RngStream r(1, 0);
  const int n = 1'000'000;
  double s = 0.0;
  double s2 = 0.0;
  std::vector<int> bins(20, 0);
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
    ++bins[static_cast<int>(u * 20.0)];
  }
  EXPECT_NEAR(s / n, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 5e-4);
  double chi2 = 0.0;
  const double expected = n / 20.0;
  for (int b : bins) chi2 += (b - expected) * (b - expected) / expected;
  EXPECT_LT(chi2, 43.8);  // 0.999 quantile, 19 dof
}

TEST(RngStream, NormalMoments) {
  RngStream r(2, 3);
  const int n = 1'000'000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 3.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 3.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 3.0 * std::sqrt(96.0 / n));
}

TEST(RngStream, ExponentialMean) {
  RngStream r(5, 0);
  const int n = 500'000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.exponential();
  EXPECT_NEAR(s / n, 1.0, 3.0 / std::sqrt(n));
}

TEST(RngStream, PoissonMeanAndVariance) {
  for (double mean : {0.3, 4.0, 9.99, 10.0, 37.5, 1000.0}) {
    RngStream r(11, static_cast<std::uint64_t>(mean * 100));
    const int n = 400'000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(r.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double m = s / n;
    const double v = s2 / n - m * m;
    EXPECT_NEAR(m, mean, 3.5 * std::sqrt(mean / n)) << mean;
    EXPECT_NEAR(v / mean, 1.0, 0.02) << mean;
  }
}

TEST(RngStream, PoissonPmfAgainstBoost) {
  for (double mean : {3.0, 25.0}) {
    RngStream r(99, 1);
    const int n = 400'000;
    const int kmax = static_cast<int>(mean * 3 + 10);
    std::vector<int> counts(kmax + 1, 0);
    for (int i = 0; i < n; ++i) {
      const auto k = r.poisson(mean);
      ++counts[std::min<std::uint64_t>(k, kmax)];
    }
    boost::math::poisson_distribution<double> dist(mean);
    double chi2 = 0.0;
    int dof = -1;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const double p = k == kmax ? boost::math::cdf(boost::math::complement(dist, kmax - 1))
                                 : boost::math::pdf(dist, k);
      pooled_obs += counts[k];
      pooled_exp += n * p;
      if (pooled_exp >= 20.0) {
        chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++dof;
        pooled_obs = 0.0;
        pooled_exp = 0.0;
      }
    }
    // loose 0.999-level bound: dof + 4.4 sqrt(2 dof)
    EXPECT_LT(chi2, dof + 4.4 * std::sqrt(2.0 * dof)) << mean;
  }
}

TEST(RngStream, PoissonOfZeroMean) {
  RngStream r(1, 1);
  EXPECT_EQ(r.poisson(0.0), 0u);
}
