#pragma once

// Experiment configuration and the `scheme`, `converge` and `fig1` commands.
// The command-line front end only parses flags and forwards here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "levy/errors.hpp"
#include "levy/json_io.hpp"
#include "levy/levy_measure.hpp"
#include "levy/mc_harness.hpp"
#include "levy/rng.hpp"
#include "levy/schemes.hpp"
#include "levy/simulate.hpp"
#include "levy/version.hpp"

namespace levy::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
};

struct SdeSpec {
  std::string type = "sin";  // sin | additive | frozen
  double a = 1.0;
  double x0 = 0.0;
  bool exact_flow = true;
  int rk4_substeps = 64;
};

struct PayoffSpec {
  std::string type = "identity";  // identity | call | cos | sin | power | constant
  double strike = 0.0;
  double k = 1.0;
  double value = 0.0;
};

struct ReferenceSpec {
  std::optional<double> value;
  double std_error = 0.0;
  std::optional<double> epsilon;
  std::optional<std::size_t> n_paths;
  std::optional<std::uint64_t> seed;
};

struct SchemeSpec {
  std::string kind = "three_moment";  // scheme kinds or "euler"
  std::optional<double> epsilon;
  std::vector<double> epsilons;
  std::vector<double> costs;  // target lambda_eps values
  std::vector<double> n_steps;
  int n = 3;
};

struct ExperimentConfig {
  json raw;
  std::optional<json> measure_json;
  std::shared_ptr<const LevyMeasure1D> measure;
  std::optional<SchemeSpec> scheme;
  std::optional<SdeSpec> sde;
  std::optional<PayoffSpec> payoff;
  std::optional<ReferenceSpec> reference;
  std::vector<double> fig1_costs;
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
  int workers = 0;
  bool record_wall_time = true;
  bool gnuplot = false;
  std::string out_dir = ".";
  std::string label;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

using namespace levy::jsonio;

inline std::uint64_t get_uint(const json& j, const char* key, std::string_view where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string(where) + ": field '" + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

inline bool get_bool(const json& j, const char* key, std::string_view where) {
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string(where) + ": field '" + key + "' must be boolean");
  return v.get<bool>();
}

inline SdeSpec parse_sde(const json& j) {
  constexpr std::string_view where = "sde";
  check_keys(j, {"type", "a", "x0", "flow", "rk4_substeps"}, where);
  SdeSpec s;
  s.type = get_string(j, "type", where);
  s.x0 = get_number_or(j, "x0", 0.0, where);
  if (s.type == "sin") {
    s.a = get_number(j, "a", where);
    if (!(s.a > 0.0)) throw ConfigError("sde: 'a' must be positive");
    if (j.contains("flow")) {
      const auto f = get_string(j, "flow", where);
      if (f != "exact" && f != "rk4") throw ConfigError("sde: 'flow' must be 'exact' or 'rk4'");
      s.exact_flow = f == "exact";
    }
    if (j.contains("rk4_substeps")) {
      s.rk4_substeps = static_cast<int>(get_uint(j, "rk4_substeps", where));
      if (s.rk4_substeps < 1) throw ConfigError("sde: 'rk4_substeps' must be >= 1");
    }
  } else if (s.type == "additive" || s.type == "frozen") {
    if (j.contains("a") || j.contains("flow") || j.contains("rk4_substeps")) {
      throw ConfigError("sde: '" + s.type + "' takes only 'x0'");
    }
  } else {
    throw ConfigError("sde: unknown type '" + s.type + "'");
  }
  return s;
}

inline PayoffSpec parse_payoff(const json& j) {
  constexpr std::string_view where = "payoff";
  require_object(j, where);
  PayoffSpec p;
  p.type = get_string(j, "type", where);
  if (p.type == "identity") {
    check_keys(j, {"type"}, where);
  } else if (p.type == "call") {
    check_keys(j, {"type", "strike"}, where);
    p.strike = get_number(j, "strike", where);
  } else if (p.type == "cos" || p.type == "sin") {
    check_keys(j, {"type", "k"}, where);
    p.k = get_number_or(j, "k", 1.0, where);
  } else if (p.type == "power") {
    check_keys(j, {"type", "k"}, where);
    p.k = static_cast<double>(get_uint(j, "k", where));
  } else if (p.type == "constant") {
    check_keys(j, {"type", "value"}, where);
    p.value = get_number(j, "value", where);
  } else {
    throw ConfigError("payoff: unknown type '" + p.type + "'");
  }
  return p;
}

inline ReferenceSpec parse_reference(const json& j) {
  constexpr std::string_view where = "reference";
  check_keys(j, {"value", "stderr", "epsilon", "n_paths", "seed"}, where);
  ReferenceSpec r;
  if (j.contains("value")) {
    if (j.contains("epsilon") || j.contains("n_paths") || j.contains("seed")) {
      throw ConfigError("reference: give either value/stderr or epsilon/n_paths/seed");
    }
    r.value = get_number(j, "value", where);
    r.std_error = get_number_or(j, "stderr", 0.0, where);
    if (r.std_error < 0.0) throw ConfigError("reference: 'stderr' must be nonnegative");
    return r;
  }
  if (j.contains("stderr")) throw ConfigError("reference: 'stderr' needs 'value'");
  if (j.contains("epsilon")) {
    r.epsilon = get_number(j, "epsilon", where);
    if (!(*r.epsilon > 0.0 && *r.epsilon <= 1.0)) {
      throw ConfigError("reference: 'epsilon' must lie in (0, 1]");
    }
  }
  if (j.contains("n_paths")) r.n_paths = get_uint(j, "n_paths", where);
  if (j.contains("seed")) r.seed = get_uint(j, "seed", where);
  return r;
}

inline SchemeSpec parse_scheme(const json& j) {
  constexpr std::string_view where = "scheme";
  check_keys(j, {"kind", "epsilon", "epsilons", "costs", "n_steps", "n"}, where);
  SchemeSpec s;
  s.kind = get_string(j, "kind", where);
  if (s.kind == "euler") {
    if (j.contains("epsilon") || j.contains("epsilons") || j.contains("costs") || j.contains("n")) {
      throw ConfigError("scheme: 'euler' takes only 'n_steps'");
    }
    s.n_steps = get_number_array(j, "n_steps", where);
    for (double n : s.n_steps) {
      if (!(n >= 1.0) || n != std::floor(n)) {
        throw ConfigError("scheme: 'n_steps' entries must be positive integers");
      }
    }
    return s;
  }
  try {
    (void)scheme_kind_from_string(s.kind);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scheme: ") + e.what());
  }
  if (j.contains("n_steps")) throw ConfigError("scheme: 'n_steps' is only valid for 'euler'");
  if (j.contains("n")) {
    s.n = static_cast<int>(get_uint(j, "n", where));
    if (s.kind != "high_order") throw ConfigError("scheme: 'n' is only valid for 'high_order'");
  }
  if (j.contains("epsilon")) s.epsilon = get_number(j, "epsilon", where);
  if (j.contains("epsilons")) s.epsilons = get_number_array(j, "epsilons", where);
  if (j.contains("costs")) s.costs = get_number_array(j, "costs", where);
  auto check_eps = [](double e) {
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("scheme: epsilon values must lie in (0, 1]");
  };
  if (s.epsilon) check_eps(*s.epsilon);
  for (double e : s.epsilons) check_eps(e);
  for (double c : s.costs) {
    if (!(c > 0.0)) throw ConfigError("scheme: 'costs' entries must be positive");
  }
  return s;
}

}  // namespace detail

/// Validates a configuration document. Unknown fields raise ConfigError.
inline ExperimentConfig parse_config(const json& j, const Overrides& ov = {}) {
  using namespace levy::jsonio;
  constexpr std::string_view where = "config";
  check_keys(j,
             {"measure", "scheme", "sde", "payoff", "n_paths", "seed", "workers", "reference",
              "fig1", "record_wall_time", "label", "output"},
             where);
  ExperimentConfig c;
  c.raw = j;
  if (j.contains("measure")) {
    c.measure_json = j.at("measure");
    c.measure = std::make_shared<const LevyMeasure1D>(measure_from_json(j.at("measure")));
  }
  if (j.contains("scheme")) c.scheme = detail::parse_scheme(j.at("scheme"));
  if (j.contains("sde")) c.sde = detail::parse_sde(j.at("sde"));
  if (j.contains("payoff")) c.payoff = detail::parse_payoff(j.at("payoff"));
  if (j.contains("reference")) c.reference = detail::parse_reference(j.at("reference"));
  if (j.contains("n_paths")) c.n_paths = detail::get_uint(j, "n_paths", where);
  if (j.contains("seed")) c.seed = detail::get_uint(j, "seed", where);
  if (j.contains("workers")) c.workers = static_cast<int>(detail::get_uint(j, "workers", where));
  if (j.contains("record_wall_time")) {
    c.record_wall_time = detail::get_bool(j, "record_wall_time", where);
  }
  if (j.contains("label")) c.label = get_string(j, "label", where);
  if (j.contains("fig1")) {
    const auto& f = j.at("fig1");
    check_keys(f, {"costs"}, "fig1");
    c.fig1_costs = get_number_array(f, "costs", "fig1");
    for (double cost : c.fig1_costs) {
      if (!(cost >= 1.0) || cost != std::floor(cost)) {
        throw ConfigError("fig1: 'costs' entries must be positive integers (Euler step counts)");
      }
    }
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, {"dir", "gnuplot"}, "output");
    if (o.contains("dir")) c.out_dir = get_string(o, "dir", "output");
    if (o.contains("gnuplot")) c.gnuplot = detail::get_bool(o, "gnuplot", "output");
  }
  if (ov.seed) c.seed = *ov.seed;
  if (ov.paths) c.n_paths = *ov.paths;
  if (ov.workers) c.workers = *ov.workers;
  if (ov.out_dir) c.out_dir = *ov.out_dir;
  if (c.n_paths < 2) throw ConfigError("config: 'n_paths' must be >= 2");
  return c;
}

inline ExperimentConfig load_config(const std::string& path, const Overrides& ov = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, ov);
}

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

inline SDEProblem::Payoff make_payoff(const PayoffSpec& p) {
  if (p.type == "identity") return [](double x) { return x; };
  if (p.type == "call") return [k = p.strike](double x) { return std::max(x - k, 0.0); };
  if (p.type == "cos") return [k = p.k](double x) { return std::cos(k * x); };
  if (p.type == "sin") return [k = p.k](double x) { return std::sin(k * x); };
  if (p.type == "power") {
    return [k = static_cast<int>(p.k)](double x) { return std::pow(x, k); };
  }
  if (p.type == "constant") return [v = p.value](double) { return v; };
  throw ConfigError("payoff: unknown type '" + p.type + "'");
}

inline SDEProblem make_problem(const ExperimentConfig& c) {
  if (!c.sde) throw ConfigError("config: 'sde' is required for this command");
  if (!c.payoff) throw ConfigError("config: 'payoff' is required for this command");
  const auto f = make_payoff(*c.payoff);
  const auto& s = *c.sde;
  if (s.type == "sin") {
    auto p = make_sin_problem(s.a, s.x0, f);
    if (!s.exact_flow) p.flow.reset();
    p.rk4_substeps = s.rk4_substeps;
    return p;
  }
  if (s.type == "additive") return make_additive_problem(s.x0, f);
  return make_frozen_problem(s.x0, f);
}

inline const LevyMeasure1D& require_measure(const ExperimentConfig& c) {
  if (!c.measure) throw ConfigError("config: 'measure' is required for this command");
  return *c.measure;
}

inline IncrementSampler exact_increments(const ExperimentConfig& c) {
  const auto& nu = require_measure(c);
  if (const auto* d = std::get_if<NigDesc>(&nu.descriptor())) {
    if (std::abs(nu.gamma() - make_nig(d->params).gamma()) > 1e-12 * (1.0 + std::abs(nu.gamma()))) {
      throw ConfigError("euler: exact increments need the default (zero-mean) NIG drift");
    }
    return nig_increment_sampler(d->params);
  }
  throw ConfigError("euler: exact increments are available for the NIG measure only");
}

inline SchemeFamily scheme_family(const ExperimentConfig& c, SchemeKind kind, int n) {
  return SchemeFamily{kind, c.measure, n};
}

inline double noise_floor(const ConvergenceStudy& s) {
  if (s.rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : s.rows) sum += std::hypot(r.std_error, s.reference.std_error);
  return 2.0 * sum / static_cast<double>(s.rows.size());
}

inline json study_summary(const ConvergenceStudy& s, std::string_view cost_axis) {
  json j;
  j["cost_axis"] = std::string(cost_axis);
  j["noise_floor"] = noise_floor(s);
  j["noise_dominated"] = s.noise_dominated;
  j["warnings"] = s.warnings;
  j["reference"] = {{"value", s.reference.value}, {"stderr", s.reference.std_error}};
  try {
    const auto fit = fit_slope(slope_points(s));
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    j["used_points"] = fit.used;
    j["insufficient_data"] = false;
  } catch (const InsufficientDataError&) {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
    j["r2"] = nullptr;
    j["used_points"] = 0;
    j["insufficient_data"] = true;
  }
  return j;
}

inline void strip_wall_time(ConvergenceStudy& s) {
  for (auto& r : s.rows) r.wall_time = 0.0;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string study_csv(const ConvergenceStudy& s, bool record_wall_time) {
  std::ostringstream os;
  if (record_wall_time) {
    write_convergence_csv(os, s);
  } else {
    auto copy = s;
    strip_wall_time(copy);
    write_convergence_csv(os, copy);
  }
  return os.str();
}

/// Reference for jump-adapted or Euler studies: explicit value, or a
/// high-order n=3 run at the configured epsilon (default: a tenth of the
/// smallest study epsilon, 10x the study paths).
inline Reference resolve_reference(const ExperimentConfig& c, const SDEProblem& p,
                                   std::optional<double> smallest_eps) {
  ReferenceSpec spec = c.reference.value_or(ReferenceSpec{});
  if (spec.value) return {*spec.value, spec.std_error};
  double eps = 0.0;
  if (spec.epsilon) {
    eps = *spec.epsilon;
  } else if (smallest_eps) {
    eps = *smallest_eps / 10.0;
  } else {
    throw ConfigError("reference: set 'value' or 'epsilon' for Euler studies");
  }
  const std::size_t paths = spec.n_paths.value_or(10 * c.n_paths);
  const std::uint64_t seed = spec.seed.value_or(c.seed + 1000003);
  return compute_reference(p, c.measure, eps, paths, seed, c.workers);
}

inline json run_metadata(const ExperimentConfig& c) {
  return {{"rng", std::string(Philox4x32::name)},
          {"version", std::string(kVersion)},
          {"seed", c.seed},
          {"n_paths", c.n_paths},
          {"config", c.raw}};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Scheme JSON plus a moment-match report.
inline json scheme_report(const ExperimentConfig& c) {
  const auto& nu = require_measure(c);
  if (!c.scheme || c.scheme->kind == "euler" || !c.scheme->epsilon) {
    throw ConfigError("scheme: command needs 'scheme.kind' (not euler) and 'scheme.epsilon'");
  }
  const auto kind = scheme_kind_from_string(c.scheme->kind);
  const auto s = SchemeFamily{kind, c.measure, c.scheme->n}.build(*c.scheme->epsilon);
  json moments = json::array();
  for (int k = 2; k <= std::max(s.order, 2); ++k) {
    moments.push_back({{"k", k},
                       {"scheme", s.moment(k)},
                       {"target", nu.moment(k)},
                       {"relative_error", moment_mismatch(s, k)}});
  }
  return {{"scheme", scheme_to_json(s)},
          {"verification",
           {{"matched_orders", s.order >= 2 ? s.order - 1 : 0},
            {"max_relative_moment_error", max_moment_mismatch(s)},
            {"moments", moments}}}};
}

inline int cmd_scheme(const ExperimentConfig& c, std::ostream& out) {
  out << scheme_report(c).dump(2) << '\n';
  return kOk;
}

/// Convergence study over the configured grid; writes convergence.csv and
/// summary.json into c.out_dir and prints the summary.
inline int cmd_converge(const ExperimentConfig& c, std::ostream& out) {
  if (!c.scheme) throw ConfigError("converge: 'scheme' is required");
  const auto& sc = *c.scheme;
  const auto problem = make_problem(c);
  ConvergenceStudy study;
  std::string cost_axis;
  json scheme_json = nullptr;
  if (sc.kind == "euler") {
    if (sc.n_steps.size() < 4) throw ConfigError("converge: need >= 4 'n_steps' values");
    const auto inc = exact_increments(c);
    const auto ref = resolve_reference(c, problem, std::nullopt);
    study = convergence_study(problem, EulerFamily{inc}, sc.n_steps, c.n_paths, c.seed, ref,
                              c.workers);
    cost_axis = "n_steps";
  } else {
    require_measure(c);
    const auto family = scheme_family(c, scheme_kind_from_string(sc.kind), sc.n);
    std::vector<double> eps = sc.epsilons;
    for (double cost : sc.costs) eps.push_back(epsilon_for_intensity(family, cost));
    if (eps.size() < 4) throw ConfigError("converge: need >= 4 'epsilons'/'costs' values");
    const auto ref = resolve_reference(c, problem, *std::min_element(eps.begin(), eps.end()));
    study = convergence_study(problem, family, eps, c.n_paths, c.seed, ref, c.workers);
    scheme_json = scheme_to_json(family.build(study.rows.front().control));
    cost_axis = "lambda_eps";
  }
  json summary = study_summary(study, cost_axis);
  summary["metadata"] = run_metadata(c);
  summary["metadata"]["scheme"] = scheme_json;
  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "convergence.csv", study_csv(study, c.record_wall_time));
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  out << summary.dump(2) << '\n';
  return kOk;
}

inline std::string fig1_gnuplot_script(double floor) {
  std::ostringstream os;
  os.precision(17);
  os << "set logscale xy\n"
     << "set xlabel 'cost (lambda_eps or n_steps)'\n"
     << "set ylabel 'absolute error'\n"
     << "set datafile separator ','\n"
     << "set key top right\n"
     << "floor = " << floor << "\n"
     << "plot 'fig1_three_moment.csv' every ::1 using 2:5 with linespoints pt 2 title '3-moment', \\\n"
     << "     'fig1_gaussian.csv' every ::1 using 2:5 with linespoints pt 6 title 'Gaussian compensation', \\\n"
     << "     'fig1_euler.csv' every ::1 using 1:5 with linespoints pt 12 title 'Euler', \\\n"
     << "     floor with lines dt 2 title 'noise floor'\n";
  return os.str();
}

/// Error-vs-cost curves for the 3-moment, Gaussian-compensation and Euler
/// schemes at matched costs, plus a metadata file with the noise floor and
/// the qualitative comparison.
inline int cmd_fig1(const ExperimentConfig& c, std::ostream& out) {
  const auto& nu = require_measure(c);
  if (!std::holds_alternative<NigDesc>(nu.descriptor())) {
    throw ConfigError("fig1: the measure must be NIG");
  }
  if (c.fig1_costs.size() < 4) throw ConfigError("fig1: need >= 4 'fig1.costs' values");
  const auto problem = make_problem(c);
  const auto three = scheme_family(c, SchemeKind::three_moment, 3);
  const auto gauss = scheme_family(c, SchemeKind::gaussian, 3);

  std::vector<double> eps3;
  std::vector<double> eps_g;
  for (double cost : c.fig1_costs) {
    eps3.push_back(epsilon_for_intensity(three, cost));
    eps_g.push_back(epsilon_for_intensity(gauss, cost));
  }
  const auto ref = resolve_reference(c, problem, *std::min_element(eps3.begin(), eps3.end()));
  const auto s3 = convergence_study(problem, three, eps3, c.n_paths, c.seed, ref, c.workers);
  const auto sg = convergence_study(problem, gauss, eps_g, c.n_paths, c.seed, ref, c.workers);
  const auto se = convergence_study(problem, EulerFamily{exact_increments(c)}, c.fig1_costs,
                                    c.n_paths, c.seed, ref, c.workers);

  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "fig1_three_moment.csv", study_csv(s3, c.record_wall_time));
  write_text(dir / "fig1_gaussian.csv", study_csv(sg, c.record_wall_time));
  write_text(dir / "fig1_euler.csv", study_csv(se, c.record_wall_time));

  const auto cmp = compare_curves(s3, se);
  auto opt_json = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  const auto& nig = std::get<NigDesc>(nu.descriptor()).params;
  json meta = run_metadata(c);
  meta["label"] = "parametrization-ambiguous";
  meta["note"] =
      "NIG (alpha, beta, delta) derived from (sigma, theta, kappa) by the subordinated Brownian "
      "motion map; only slopes and orderings are meaningful";
  meta["nig"] = {{"alpha", nig.alpha}, {"beta", nig.beta}, {"delta", nig.delta},
                 {"mu_drift", nig.mu_drift()}};
  meta["reference"] = {{"value", ref.value}, {"stderr", ref.std_error}};
  meta["noise_floor"] = std::max({noise_floor(s3), noise_floor(sg), noise_floor(se)});
  meta["curves"] = {
      {"three_moment", {{"file", "fig1_three_moment.csv"}, {"summary", study_summary(s3, "lambda_eps")}}},
      {"gaussian", {{"file", "fig1_gaussian.csv"}, {"summary", study_summary(sg, "lambda_eps")}}},
      {"euler", {{"file", "fig1_euler.csv"}, {"summary", study_summary(se, "n_steps")}}}};
  meta["comparison"] = {{"compared_costs", cmp.compared},
                        {"three_moment_below_euler", cmp.first_below_second},
                        {"three_moment_floor_cost", opt_json(cmp.first_floor_cost)},
                        {"euler_floor_cost", opt_json(cmp.second_floor_cost)},
                        {"three_moment_reaches_floor_first", cmp.first_reaches_floor_sooner}};
  write_text(dir / "fig1_metadata.json", meta.dump(2) + "\n");
  if (c.gnuplot) write_text(dir / "fig1.gp", fig1_gnuplot_script(meta["noise_floor"].get<double>()));
  out << meta["comparison"].dump(2) << '\n';
  return kOk;
}

/// Runs a command, mapping failures to exit codes: 2 for configuration
/// errors, 3 for numerical failures.
inline int run_guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace levy::cli
