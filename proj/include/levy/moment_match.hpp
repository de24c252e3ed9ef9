#pragma once

// Moment matching for the high-order schemes:
//  * the limiting small-jump profile mu* of a stable-like measure and its
//    moments,
//  * a discrete probability measure with nonzero nodes matching moments of
//    mu* (Gauss rule via Golub-Welsch, or the explicit 4-atom solution),
//  * the epsilon-dependent atom weights solving the square Vandermonde
//    system that matches the partial moments of the actual measure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "levy/errors.hpp"
#include "levy/levy_measure.hpp"
#include "levy/specfun.hpp"

namespace levy {

/// Probability density (2-alpha)|x|^(1-alpha) (rho 1_{[0,1]} + (1-rho) 1_{[-1,0]}).
struct MuStar {
  double alpha = 1.0;
  double rho = 0.5;

  MuStar() = default;
  MuStar(double a, double r) : alpha(a), rho(r) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("MuStar: alpha must lie in (0,2)");
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("MuStar: rho must lie in [0,1]");
  }
  static MuStar from(const StableParams& s) { return {s.alpha, s.rho()}; }

  [[nodiscard]] double density(double x) const {
    if (x < -1.0 || x > 1.0) return 0.0;
    const double w = x >= 0.0 ? rho : 1.0 - rho;
    return (2.0 - alpha) * std::pow(std::abs(x), 1.0 - alpha) * w;
  }
};

/// m_k = (2-alpha)/(k+2-alpha) (rho + (-1)^k (1-rho)).
inline double mu_star_moment(const MuStar& m, int k) {
  if (k < 0) throw DomainError("mu_star_moment: k must be nonnegative");
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  return (2.0 - m.alpha) / (k + 2.0 - m.alpha) * (m.rho + parity * (1.0 - m.rho));
}

/// Atoms x_0 < ... < x_n in [-1,1] \ {0} with positive weights summing to 1.
struct DiscreteMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha = 1.0;
  double rho = 0.5;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }

  [[nodiscard]] double moment(int k) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * std::pow(nodes[i], k);
    return s.value();
  }

  /// Throws DomainError if the structural invariants do not hold.
  void validate() const {
    if (nodes.empty() || nodes.size() != weights.size()) {
      throw DomainError("DiscreteMeasure: nodes and weights must be nonempty and equal length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] == 0.0 || std::abs(nodes[i]) > 1.0) {
        throw DomainError("DiscreteMeasure: nodes must be nonzero and within [-1,1]");
      }
      if (i > 0 && !(nodes[i] > nodes[i - 1])) {
        throw DomainError("DiscreteMeasure: nodes must be strictly increasing");
      }
      if (!(weights[i] > 0.0)) throw DomainError("DiscreteMeasure: weights must be positive");
      total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("DiscreteMeasure: weights must sum to 1");
  }
};

/// Jacobi matrix of a measure from its moments m_0..m_{2N} via Cholesky
/// factorization of the (N+1)x(N+1) Hankel matrix.
inline TridiagonalSym jacobi_from_moments(std::span<const double> moments, std::size_t n_points) {
  const std::size_t dim = n_points + 1;
  if (moments.size() < 2 * n_points + 1) {
    throw DomainError("jacobi_from_moments: need moments m_0..m_{2N}");
  }
  std::vector<double> r(dim * dim, 0.0);
  auto R = [&](std::size_t i, std::size_t j) -> double& { return r[i * dim + j]; };
  for (std::size_t i = 0; i < dim; ++i) {
    CompensatedSum diag;
    diag += moments[2 * i];
    for (std::size_t k = 0; k < i; ++k) diag += -R(k, i) * R(k, i);
    const double d = diag.value();
    if (!(d > 0.0)) {
      throw IllConditionedError("moment matrix is not numerically positive definite");
    }
    R(i, i) = std::sqrt(d);
    for (std::size_t j = i + 1; j < dim; ++j) {
      CompensatedSum off;
      off += moments[i + j];
      for (std::size_t k = 0; k < i; ++k) off += -R(k, i) * R(k, j);
      R(i, j) = off.value() / R(i, i);
    }
  }
  TridiagonalSym jac;
  jac.diagonal.resize(n_points);
  jac.off_diagonal.resize(n_points > 0 ? n_points - 1 : 0);
  for (std::size_t j = 0; j < n_points; ++j) {
    double a = R(j, j + 1) / R(j, j);
    if (j > 0) a -= R(j - 1, j) / R(j - 1, j - 1);
    jac.diagonal[j] = a;
    if (j + 1 < n_points) jac.off_diagonal[j] = R(j + 1, j + 1) / R(j, j);
  }
  return jac;
}

/// n_atoms-point Gauss rule of mu*: matches moments 1..2 n_atoms - 1.
inline DiscreteMeasure discrete_match(const MuStar& m, int n_atoms) {
  if (n_atoms < 1) throw DomainError("discrete_match: n_atoms must be >= 1");
  const auto n = static_cast<std::size_t>(n_atoms);
  std::vector<double> moments(2 * n + 1);
  for (std::size_t k = 0; k < moments.size(); ++k) moments[k] = mu_star_moment(m, static_cast<int>(k));

  const auto eig = eigen_tridiag(jacobi_from_moments(moments, n));
  DiscreteMeasure out;
  out.alpha = m.alpha;
  out.rho = m.rho;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = eig.eigenvalues[i];
    if (std::abs(x) < 1e-8) {
      std::ostringstream msg;
      msg << "discrete_match: Gauss node at " << x
          << " is (numerically) zero; use an even atom count for symmetric profiles";
      throw DegenerateNodeError(msg.str());
    }
    out.nodes.push_back(x);
    out.weights.push_back(moments[0] * eig.first_components[i] * eig.first_components[i]);
  }
  // Renormalize the last few ulps so the weights sum to one.
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  out.validate();
  return out;
}

/// Parameters of the explicit 4-atom solution matching moments 1..3 of mu*.
struct FourAtomParams {
  double eps_bar;
  double sigma2;
  double skew;
  double p;
  double eps1;
  double eps2;
};

inline FourAtomParams four_atom_params(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("four_atom_params: alpha in (0,2)");
  FourAtomParams f{};
  f.eps_bar = (2.0 - alpha) / (3.0 - alpha);
  f.sigma2 = (2.0 - alpha) / ((4.0 - alpha) * (3.0 - alpha) * (3.0 - alpha));
  f.skew = 2.0 * (alpha - 1.0) / (5.0 - alpha) * std::sqrt((4.0 - alpha) / (2.0 - alpha));
  const double sgn = f.skew > 0.0 ? 1.0 : (f.skew < 0.0 ? -1.0 : 0.0);
  f.p = 0.5 - 0.5 * sgn * std::sqrt(f.skew * f.skew / (f.skew * f.skew + 4.0));
  const double sigma = std::sqrt(f.sigma2);
  f.eps1 = f.eps_bar - sigma * std::sqrt(f.p / (1.0 - f.p));
  f.eps2 = f.eps_bar + sigma * std::sqrt((1.0 - f.p) / f.p);
  return f;
}

/// (1-rho)(p d_{-eps2} + (1-p) d_{-eps1}) + rho((1-p) d_{eps1} + p d_{eps2}).
inline DiscreteMeasure explicit_four_atom(const MuStar& m) {
  if (!(m.rho > 0.0 && m.rho < 1.0)) {
    throw DomainError("explicit_four_atom: needs mass on both half-lines (0 < rho < 1)");
  }
  const auto f = four_atom_params(m.alpha);
  DiscreteMeasure out;
  out.alpha = m.alpha;
  out.rho = m.rho;
  out.nodes = {-f.eps2, -f.eps1, f.eps1, f.eps2};
  out.weights = {(1.0 - m.rho) * f.p, (1.0 - m.rho) * (1.0 - f.p), m.rho * (1.0 - f.p),
                 m.rho * f.p};
  out.validate();
  return out;
}

/// Solves sum_i z_i x_i^k = b_k, k = 0..n (transposed Vandermonde / moment
/// system) by Bjorck-Pereyra elimination. O(n^2), no explicit matrix.
inline std::vector<double> solve_vandermonde_moments(std::span<const double> x,
                                                     std::span<const double> b) {
  const std::size_t np1 = x.size();
  if (np1 == 0 || b.size() != np1) throw DomainError("vandermonde: size mismatch");
  for (std::size_t i = 0; i < np1; ++i) {
    for (std::size_t j = i + 1; j < np1; ++j) {
      if (x[i] == x[j]) throw SingularSystemError("vandermonde: nodes must be distinct");
    }
  }
  std::vector<double> z(b.begin(), b.end());
  const std::size_t n = np1 - 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = n; i > k; --i) z[i] -= x[k] * z[i - 1];
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t i = kk + 1; i <= n; ++i) z[i] /= (x[i] - x[i - kk - 1]);
    for (std::size_t i = kk; i < n; ++i) z[i] -= z[i + 1];
  }
  return z;
}

/// Right-hand side of the weight system: int_{|x|<=eps} x^{2+k} nu(dx) / (sigma_eps^2 eps^k).
inline std::vector<double> atom_rate_rhs(const LevyMeasure1D& nu, double eps, std::size_t n_nodes) {
  const double sigma2 = nu.partial_moment(2, eps);
  if (!(sigma2 > 0.0)) throw DomainError("solve_atom_rates: sigma_eps^2 must be positive");
  std::vector<double> rhs(n_nodes);
  rhs[0] = 1.0;
  for (std::size_t k = 1; k < n_nodes; ++k) {
    rhs[k] = nu.partial_moment(static_cast<int>(k) + 2, eps) / (sigma2 * std::pow(eps, k));
  }
  return rhs;
}

/// Weights a_i^eps with sigma_eps^2 sum_i a_i x_i^k eps^k = int_{|x|<=eps} x^{2+k} nu(dx).
/// Throws EpsilonTooLargeError if any weight is not positive.
inline std::vector<double> solve_atom_rates(std::span<const double> nodes, const LevyMeasure1D& nu,
                                            double eps) {
  if (!(eps > 0.0)) throw DomainError("solve_atom_rates: eps must be positive");
  for (double x : nodes) {
    if (x == 0.0) throw DomainError("solve_atom_rates: nodes must be nonzero");
  }
  const auto rhs = atom_rate_rhs(nu, eps, nodes.size());
  auto a = solve_vandermonde_moments(nodes, rhs);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0)) {
      std::ostringstream msg;
      msg << "epsilon too large: weight a_" << i << " = " << a[i] << " at eps = " << eps
          << " is not positive (positivity threshold eps_0 not reached); retry with a smaller "
             "epsilon";
      throw EpsilonTooLargeError(msg.str());
    }
  }
  return a;
}

}  // namespace levy
