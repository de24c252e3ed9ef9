#pragma once

// JSON encodings of measure descriptors, discrete measures and schemes.
// Parsing is strict: unknown keys and wrong types raise ConfigError.

#include <cmath>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "levy/errors.hpp"
#include "levy/levy_measure.hpp"
#include "levy/moment_match.hpp"
#include "levy/schemes.hpp"

namespace levy {

using json = nlohmann::json;

namespace jsonio {

inline void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
}

/// Rejects keys outside `allowed`.
inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                       std::string_view where) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown field '" + item.key() + "'");
  }
}

inline double get_number(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(where) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline double get_number_or(const json& j, const char* key, double fallback,
                            std::string_view where) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

inline std::string get_string(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<double> get_number_array(const json& j, const char* key,
                                            std::string_view where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string(where) + ": field '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw ConfigError(std::string(where) + ": field '" + key + "' must hold numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace jsonio

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

/// Builds a measure from {"type": "truncated_stable" | "cgmy" | "nig", ...}.
/// NIG also accepts {"sigma", "theta", "kappa"}. An optional "gamma"
/// replaces the default drift.
inline LevyMeasure1D measure_from_json(const json& j) {
  using namespace jsonio;
  constexpr std::string_view where = "measure";
  require_object(j, where);
  const std::string type = get_string(j, "type", where);
  try {
    std::optional<LevyMeasure1D> nu;
    if (type == "truncated_stable") {
      check_keys(j, {"type", "alpha", "c_plus", "c_minus", "gamma"}, where);
      nu = make_truncated_stable(get_number(j, "alpha", where), get_number(j, "c_plus", where),
                                 get_number(j, "c_minus", where));
    } else if (type == "cgmy") {
      check_keys(j, {"type", "C", "G", "M", "Y", "gamma"}, where);
      nu = make_cgmy(get_number(j, "C", where), get_number(j, "G", where),
                     get_number(j, "M", where), get_number(j, "Y", where));
    } else if (type == "nig") {
      check_keys(j, {"type", "alpha", "beta", "delta", "sigma", "theta", "kappa", "gamma"}, where);
      const bool abd = j.contains("alpha") || j.contains("beta") || j.contains("delta");
      const bool stk = j.contains("sigma") || j.contains("theta") || j.contains("kappa");
      if (abd == stk) {
        throw ConfigError("measure: nig needs either alpha/beta/delta or sigma/theta/kappa");
      }
      NigParams p;
      if (abd) {
        p.alpha = get_number(j, "alpha", where);
        p.beta = get_number(j, "beta", where);
        p.delta = get_number(j, "delta", where);
      } else {
        p = NigParams::from_sigma_theta_kappa(get_number(j, "sigma", where),
                                              get_number(j, "theta", where),
                                              get_number(j, "kappa", where));
      }
      nu = make_nig(p);
    } else {
      throw ConfigError("measure: unknown type '" + type + "'");
    }
    if (j.contains("gamma")) return nu->with_gamma(get_number(j, "gamma", where));
    return *nu;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
}

inline json measure_to_json(const LevyMeasure1D& nu) {
  json j;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, TruncatedStableDesc>) {
          j = {{"type", "truncated_stable"},
               {"alpha", d.alpha},
               {"c_plus", d.c_plus},
               {"c_minus", d.c_minus}};
        } else if constexpr (std::is_same_v<T, CgmyDesc>) {
          j = {{"type", "cgmy"}, {"C", d.C}, {"G", d.G}, {"M", d.M}, {"Y", d.Y}};
        } else if constexpr (std::is_same_v<T, NigDesc>) {
          j = {{"type", "nig"},
               {"alpha", d.params.alpha},
               {"beta", d.params.beta},
               {"delta", d.params.delta}};
        } else {
          throw UnsupportedError("measure_to_json: custom measure '" + d.name +
                                 "' has no JSON descriptor");
        }
      },
      nu.descriptor());
  j["gamma"] = nu.gamma();
  return j;
}

// ---------------------------------------------------------------------------
// Discrete measures
// ---------------------------------------------------------------------------

inline json discrete_measure_to_json(const DiscreteMeasure& m) {
  return {{"nodes", m.nodes}, {"weights", m.weights}, {"alpha", m.alpha}, {"rho", m.rho}};
}

inline DiscreteMeasure discrete_measure_from_json(const json& j) {
  using namespace jsonio;
  constexpr std::string_view where = "discrete measure";
  check_keys(j, {"nodes", "weights", "alpha", "rho"}, where);
  DiscreteMeasure m;
  m.nodes = get_number_array(j, "nodes", where);
  m.weights = get_number_array(j, "weights", where);
  m.alpha = get_number(j, "alpha", where);
  m.rho = get_number(j, "rho", where);
  try {
    m.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

inline json scheme_to_json(const FiniteActivityScheme& s) {
  json atoms = json::array();
  for (const auto& a : s.atoms) atoms.push_back({a.location, a.rate});
  json j = {{"kind", std::string(to_string(s.kind))},
            {"epsilon", s.epsilon},
            {"atoms", atoms},
            {"tail_rate", s.tail_rate},
            {"gamma_eps", s.gamma_eps},
            {"lambda_eps", s.lambda_eps},
            {"gauss_sigma2", s.gauss_sigma2},
            {"order", s.order},
            {"measure", measure_to_json(s.measure())}};
  if (s.nodes) j["nodes"] = discrete_measure_to_json(*s.nodes);
  return j;
}

/// Restores a scheme exactly as dumped (no recomputation).
inline FiniteActivityScheme scheme_from_json(const json& j) {
  using namespace jsonio;
  constexpr std::string_view where = "scheme";
  check_keys(j,
             {"kind", "epsilon", "atoms", "tail_rate", "gamma_eps", "lambda_eps", "gauss_sigma2",
              "order", "measure", "nodes"},
             where);
  FiniteActivityScheme s;
  try {
    s.kind = scheme_kind_from_string(get_string(j, "kind", where));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  s.base = std::make_shared<const LevyMeasure1D>(measure_from_json(j.at("measure")));
  s.epsilon = get_number(j, "epsilon", where);
  if (!j.contains("atoms") || !j.at("atoms").is_array()) {
    throw ConfigError("scheme: 'atoms' must be an array of [location, rate] pairs");
  }
  for (const auto& a : j.at("atoms")) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw ConfigError("scheme: each atom must be [location, rate]");
    }
    s.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
  }
  s.tail_rate = get_number(j, "tail_rate", where);
  s.gamma_eps = get_number(j, "gamma_eps", where);
  s.lambda_eps = get_number(j, "lambda_eps", where);
  s.gauss_sigma2 = get_number_or(j, "gauss_sigma2", 0.0, where);
  const double order = get_number(j, "order", where);
  if (order != std::floor(order)) throw ConfigError("scheme: 'order' must be an integer");
  s.order = static_cast<int>(order);
  if (j.contains("nodes")) s.nodes = discrete_measure_from_json(j.at("nodes"));
  return s;
}

}  // namespace levy
