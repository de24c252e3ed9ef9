#pragma once

// Special functions and small dense numerics used across the library:
// modified Bessel functions K0/K1, compensated summation, and a symmetric
// tridiagonal eigensolver (implicit QL) for Gauss rules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "levy/errors.hpp"

namespace levy {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Pairwise summation; error grows like O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// log(exp(a) + exp(b)) without overflow.
inline double log_sum_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

namespace detail {

inline constexpr double kEulerGamma = std::numbers::egamma;

// Power series for I0, I1, K0, K1; used for 0 < x <= 2.
struct BesselSeries {
  double k0;
  double k1;
};

inline BesselSeries bessel_k_series(double x) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x);

  // term_k = q^k / (k!)^2 ; term1_k = q^k / (k! (k+1)!)
  double term = 1.0;
  double term1 = 1.0;
  double harmonic = 0.0;  // H_k
  double i0 = 0.0;
  double i1s = 0.0;
  double k0s = 0.0;
  double k1s = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term *= q / (static_cast<double>(k) * k);
      term1 *= q / (static_cast<double>(k) * (k + 1));
      harmonic += 1.0 / k;
    }
    i0 += term;
    i1s += term1;
    k0s += term * harmonic;
    // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
    k1s += term1 * (-2.0 * kEulerGamma + 2.0 * harmonic + 1.0 / (k + 1));
    if (term < 1e-18 * i0 && term1 < 1e-18 * i1s) break;
  }
  const double i1 = 0.5 * x * i1s;
  BesselSeries out{};
  out.k0 = -(lg + kEulerGamma) * i0 + k0s;
  out.k1 = 1.0 / x + lg * i1 - 0.25 * x * k1s;
  return out;
}

// Steed's continued fraction (Temme) for x > 2, order 0 and 1.
// Returns exp(x) * K0(x), exp(x) * K1(x).
inline BesselSeries bessel_k_scaled_cf(double x) {
  constexpr double kEps = 1e-16;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h = a1 * h;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace detail

/// Modified Bessel function of the second kind, order 0 or 1, for x > 0.
inline double bessel_k(int order, double x) {
  if (order != 0 && order != 1) {
    throw DomainError("bessel_k: only orders 0 and 1 are supported");
  }
  if (!(x > 0.0)) throw DomainError("bessel_k: argument must be positive");
  if (x <= 2.0) {
    const auto s = detail::bessel_k_series(x);
    return order == 0 ? s.k0 : s.k1;
  }
  if (x > 750.0) return 0.0;
  const auto s = detail::bessel_k_scaled_cf(x);
  return std::exp(-x) * (order == 0 ? s.k0 : s.k1);
}

/// exp(x) * K_order(x); finite for arbitrarily large x.
inline double bessel_k_scaled(int order, double x) {
  if (order != 0 && order != 1) {
    throw DomainError("bessel_k_scaled: only orders 0 and 1 are supported");
  }
  if (!(x > 0.0)) throw DomainError("bessel_k_scaled: argument must be positive");
  if (x <= 2.0) {
    const auto s = detail::bessel_k_series(x);
    return std::exp(x) * (order == 0 ? s.k0 : s.k1);
  }
  if (x > 1e8) {
    // Leading terms of the large-argument expansion; relative error < 1e-16.
    const double mu = order == 0 ? 0.0 : 4.0;
    return std::sqrt(std::numbers::pi / (2.0 * x)) * (1.0 + (mu - 1.0) / (8.0 * x));
  }
  const auto s = detail::bessel_k_scaled_cf(x);
  return order == 0 ? s.k0 : s.k1;
}

/// Symmetric tridiagonal matrix: `diagonal` of size n, `off_diagonal` of size n-1.
struct TridiagonalSym {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  [[nodiscard]] std::size_t size() const { return diagonal.size(); }
};

/// Eigenvalues (ascending) with the first component of each unit eigenvector.
struct TridiagEigen {
  std::vector<double> eigenvalues;
  std::vector<double> first_components;
};

/// Implicit QL with Wilkinson-type shifts. Accumulates the full rotation
/// product; fine for the small (<= 16) systems this library builds.
inline TridiagEigen eigen_tridiag(const TridiagonalSym& m) {
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("eigen_tridiag: empty matrix");
  if (m.off_diagonal.size() + 1 != n) {
    throw DomainError("eigen_tridiag: off-diagonal must have size n-1");
  }
  std::vector<double> d = m.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(m.off_diagonal.begin(), m.off_diagonal.end(), e.begin());
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
  auto zat = [&](std::size_t r, std::size_t c) -> double& { return z[r * n + c]; };

  constexpr int kMaxIter = 60;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t mm = l;
    do {
      for (mm = l; mm + 1 < n; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= kEps * dd) break;
      }
      if (mm != l) {
        if (iter++ == kMaxIter) {
          throw NumericalError("eigen_tridiag: no convergence after iteration cap");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (std::size_t ii = mm; ii-- > l;) {
          double f = s * e[ii];
          const double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            d[ii + 1] -= p;
            e[mm] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = zat(k, ii + 1);
            zat(k, ii + 1) = s * zat(k, ii) + c * f;
            zat(k, ii) = c * zat(k, ii) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagEigen out;
  out.eigenvalues.reserve(n);
  out.first_components.reserve(n);
  for (std::size_t j : order) {
    out.eigenvalues.push_back(d[j]);
    out.first_components.push_back(zat(0, j));
  }
  return out;
}

}  // namespace levy
