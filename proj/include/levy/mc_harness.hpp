#pragma once

// Monte Carlo estimation of E f(X_1), convergence studies over epsilon
// (jump-adapted) or n_steps (Euler), and log-log slope regression.
//
// Paths are grouped into fixed-size chunks. Each chunk is accumulated
// sequentially in path order and the chunk summaries are merged in chunk
// order, so the result depends on the seed only, never on the worker count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "levy/errors.hpp"
#include "levy/rng.hpp"
#include "levy/schemes.hpp"
#include "levy/simulate.hpp"

namespace levy {

struct MCResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  double avg_jumps_per_path = 0.0;
  double wall_time = 0.0;  // seconds
  std::size_t failures = 0;
};

struct JumpAdaptedMethod {
  JumpSampler sampler;
};

struct EulerMethod {
  IncrementSampler increment;
  int n_steps = 1;
};

using Method = std::variant<JumpAdaptedMethod, EulerMethod>;

/// Running count / mean / centered sum of squares (Chan et al. merge).
struct MomentAccumulator {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }

  void merge(const MomentAccumulator& o) {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double n = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / n;
    m2 += o.m2 + d * d * count * o.count / n;
    count = n;
  }
};

/// Worker count: explicit value if positive, else LEVY_SCHEMES_WORKERS, else
/// the hardware concurrency.
inline unsigned resolve_workers(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("LEVY_SCHEMES_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

inline constexpr std::size_t kChunkPaths = 4096;

struct ChunkSummary {
  MomentAccumulator payoff;
  double jumps = 0.0;
  std::size_t failures = 0;
};

inline ChunkSummary run_chunk(const SDEProblem& p, const Method& method, std::uint64_t seed,
                              std::size_t begin, std::size_t end) {
  ChunkSummary out;
  for (std::size_t i = begin; i < end; ++i) {
    RngStream rng(seed, i);
    try {
      double x = 0.0;
      if (const auto* ja = std::get_if<JumpAdaptedMethod>(&method)) {
        const auto path = simulate_jump_adapted(p, ja->sampler, rng);
        x = path.terminal;
        out.jumps += static_cast<double>(path.jumps);
      } else {
        const auto& eu = std::get<EulerMethod>(method);
        x = simulate_euler(p, eu.increment, eu.n_steps, rng);
      }
      const double f = p.payoff(x);
      if (!std::isfinite(f)) throw PathFailure("non-finite payoff");
      out.payoff.add(f);
    } catch (const PathFailure&) {
      ++out.failures;
    }
  }
  return out;
}

}  // namespace detail

/// Estimates E f(X_1) over n_paths paths keyed (seed, path index).
inline MCResult mc_estimate(const SDEProblem& p, const Method& method, std::size_t n_paths,
                            std::uint64_t seed, int workers = 0) {
  if (n_paths < 2) throw DomainError("mc_estimate: n_paths must be >= 2");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n_chunks = (n_paths + detail::kChunkPaths - 1) / detail::kChunkPaths;
  std::vector<detail::ChunkSummary> chunks(n_chunks);
  const unsigned n_workers =
      std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(n_chunks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        const std::size_t begin = c * detail::kChunkPaths;
        const std::size_t end = std::min(n_paths, begin + detail::kChunkPaths);
        chunks[c] = detail::run_chunk(p, method, seed, begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  MomentAccumulator total;
  CompensatedSum jumps;
  std::size_t failures = 0;
  for (const auto& c : chunks) {
    total.merge(c.payoff);
    jumps += c.jumps;
    failures += c.failures;
  }
  if (failures == n_paths) throw NumericalError("mc_estimate: all paths failed");

  MCResult r;
  r.n_paths = n_paths;
  r.failures = failures;
  r.mean = total.mean;
  r.std_error = total.count > 1.0 ? std::sqrt(total.m2 / (total.count - 1.0) / total.count) : 0.0;
  if (std::holds_alternative<JumpAdaptedMethod>(method)) {
    r.avg_jumps_per_path = jumps.value() / static_cast<double>(n_paths);
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  double control = 0.0;                 // epsilon or n_steps
  std::optional<double> lambda_eps;     // jump-adapted only
  double cost = 0.0;                    // lambda_eps or n_steps
  double estimate = 0.0;
  double std_error = 0.0;
  double abs_error = 0.0;
  double wall_time = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  double avg_jumps_per_path = 0.0;
};

struct Reference {
  double value = 0.0;
  double std_error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  Reference reference;
  bool noise_dominated = false;
  std::vector<std::string> warnings;
};

/// Builds a jump-adapted scheme for one epsilon.
struct SchemeFamily {
  SchemeKind kind = SchemeKind::three_moment;
  std::shared_ptr<const LevyMeasure1D> measure;
  int n = 3;  // high-order only

  [[nodiscard]] FiniteActivityScheme build(double eps) const {
    switch (kind) {
      case SchemeKind::truncation: return build_truncation(*measure, eps);
      case SchemeKind::gaussian: return build_gaussian_compensation(*measure, eps);
      case SchemeKind::three_moment: return build_three_moment(*measure, eps);
      case SchemeKind::high_order: return build_high_order(*measure, eps, n);
    }
    throw DomainError("SchemeFamily: unknown kind");
  }
};

struct EulerFamily {
  IncrementSampler increment;
};

using MethodFamily = std::variant<SchemeFamily, EulerFamily>;

namespace detail {

inline void flag_noise(ConvergenceStudy& s) {
  if (s.rows.empty()) return;
  double smallest = s.rows.front().abs_error;
  for (const auto& r : s.rows) smallest = std::min(smallest, r.abs_error);
  if (s.reference.std_error > 0.5 * smallest) {
    s.noise_dominated = true;
    s.warnings.emplace_back("noise-dominated: reference stderr exceeds half the smallest bias");
  }
}

}  // namespace detail

/// One Monte Carlo run per control value (epsilon for schemes, n_steps for
/// Euler). Rows are sorted by control.
inline ConvergenceStudy convergence_study(const SDEProblem& p, const MethodFamily& family,
                                          std::vector<double> controls, std::size_t n_paths,
                                          std::uint64_t seed, Reference reference,
                                          int workers = 0) {
  if (controls.empty()) throw DomainError("convergence_study: empty control grid");
  std::sort(controls.begin(), controls.end());
  ConvergenceStudy study;
  study.reference = reference;
  for (double c : controls) {
    ConvergenceRow row;
    row.control = c;
    row.n_paths = n_paths;
    row.seed = seed;
    MCResult r;
    if (const auto* sf = std::get_if<SchemeFamily>(&family)) {
      auto scheme = sf->build(c);
      row.lambda_eps = scheme.lambda_eps;
      row.cost = scheme.lambda_eps;
      r = mc_estimate(p, JumpAdaptedMethod{JumpSampler(std::move(scheme))}, n_paths, seed, workers);
    } else {
      const auto& ef = std::get<EulerFamily>(family);
      const int steps = static_cast<int>(std::lround(c));
      if (steps < 1 || std::abs(c - steps) > 1e-9) {
        throw DomainError("convergence_study: Euler controls must be positive integers");
      }
      row.cost = steps;
      r = mc_estimate(p, EulerMethod{ef.increment, steps}, n_paths, seed, workers);
    }
    row.estimate = r.mean;
    row.std_error = r.std_error;
    row.abs_error = std::abs(r.mean - reference.value);
    row.wall_time = r.wall_time;
    row.avg_jumps_per_path = r.avg_jumps_per_path;
    study.rows.push_back(row);
  }
  detail::flag_noise(study);
  return study;
}

/// High-accuracy reference from the high-order n=3 scheme.
inline Reference compute_reference(const SDEProblem& p, std::shared_ptr<const LevyMeasure1D> nu,
                                   double eps, std::size_t n_paths, std::uint64_t seed,
                                   int workers = 0) {
  JumpSampler sampler(build_high_order(*nu, eps, 3));
  const auto r = mc_estimate(p, JumpAdaptedMethod{std::move(sampler)}, n_paths, seed, workers);
  return {r.mean, r.std_error};
}

// ---------------------------------------------------------------------------
// Slope regression
// ---------------------------------------------------------------------------

struct SlopePoint {
  double cost;
  double error;
  double std_error = 0.0;  // noise level of `error`
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t used = 0;
};

/// OLS of log error on log cost over points with error > 2 std_error.
inline SlopeFit fit_slope(const std::vector<SlopePoint>& points) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& pt : points) {
    if (!(pt.cost > 0.0) || !(pt.error > 0.0)) continue;
    if (!(pt.error > 2.0 * pt.std_error)) continue;
    xs.push_back(std::log(pt.cost));
    ys.push_back(std::log(pt.error));
  }
  if (xs.size() < 3) {
    throw InsufficientDataError("fit_slope: fewer than 3 points above the noise floor");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("fit_slope: costs are all equal");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.used = xs.size();
  return f;
}

/// Slope points from study rows; the noise level combines the row and the
/// reference standard errors.
inline std::vector<SlopePoint> slope_points(const ConvergenceStudy& s) {
  std::vector<SlopePoint> pts;
  for (const auto& r : s.rows) {
    pts.push_back({r.cost, r.abs_error, std::hypot(r.std_error, s.reference.std_error)});
  }
  return pts;
}

/// Epsilon in (0, 1] at which the family's lambda_eps equals `intensity`
/// (lambda_eps decreases in epsilon). Geometric bisection to 1e-10 relative.
inline double epsilon_for_intensity(const SchemeFamily& family, double intensity) {
  if (!(intensity > 0.0)) throw DomainError("epsilon_for_intensity: intensity must be positive");
  auto lambda = [&](double eps) { return family.build(eps).lambda_eps; };
  double hi = 1.0;
  if (lambda(hi) >= intensity) {
    throw DomainError("epsilon_for_intensity: intensity below lambda_eps at epsilon = 1");
  }
  double lo = 0.5;
  while (lambda(lo) < intensity) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-12) throw NumericalError("epsilon_for_intensity: cannot bracket epsilon");
  }
  while (hi / lo - 1.0 > 1e-10) {
    const double mid = std::sqrt(lo * hi);
    if (lambda(mid) >= intensity) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

/// Qualitative comparison of two error-vs-cost curves measured against the
/// same reference. A row is above the noise floor when its error exceeds
/// twice the combined (row, reference) standard error.
struct CurveComparison {
  std::size_t compared = 0;       // costs where both curves are above the floor
  bool first_below_second = true;  // at every compared cost
  std::optional<double> first_floor_cost;
  std::optional<double> second_floor_cost;
  bool first_reaches_floor_sooner = false;
};

namespace detail {

inline bool above_floor(const ConvergenceRow& r, const Reference& ref) {
  return r.abs_error > 2.0 * std::hypot(r.std_error, ref.std_error);
}

/// Lowest cost from which every row is inside the noise floor.
inline std::optional<double> floor_cost(std::vector<ConvergenceRow> rows, const Reference& ref) {
  std::sort(rows.begin(), rows.end(),
            [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.cost < b.cost; });
  std::optional<double> cost;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (above_floor(*it, ref)) break;
    cost = it->cost;
  }
  return cost;
}

}  // namespace detail

/// Compares curves row by row at equal cost (relative tolerance 1e-6).
inline CurveComparison compare_curves(const ConvergenceStudy& first,
                                      const ConvergenceStudy& second) {
  CurveComparison c;
  for (const auto& a : first.rows) {
    for (const auto& b : second.rows) {
      if (std::abs(a.cost - b.cost) > 1e-6 * b.cost) continue;
      if (!detail::above_floor(a, first.reference) || !detail::above_floor(b, second.reference)) {
        continue;
      }
      ++c.compared;
      if (!(a.abs_error < b.abs_error)) c.first_below_second = false;
    }
  }
  c.first_floor_cost = detail::floor_cost(first.rows, first.reference);
  c.second_floor_cost = detail::floor_cost(second.rows, second.reference);
  c.first_reaches_floor_sooner =
      c.first_floor_cost && (!c.second_floor_cost || *c.first_floor_cost < *c.second_floor_cost);
  return c;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline void write_convergence_csv(std::ostream& os, const ConvergenceStudy& s) {
  os << "control,lambda_eps,estimate,stderr,abs_error,wall_time_s,n_paths,seed\n";
  const auto old_precision = os.precision(17);
  for (const auto& r : s.rows) {
    os << r.control << ',';
    if (r.lambda_eps) os << *r.lambda_eps;
    os << ',' << r.estimate << ',' << r.std_error << ',' << r.abs_error << ',' << r.wall_time
       << ',' << r.n_paths << ',' << r.seed << '\n';
  }
  os.precision(old_precision);
}

}  // namespace levy
