#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbar/format.hpp"
#include "hbar/quadrature.hpp"

namespace hbar {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  // black_hole
  double mass_kg = 0.0;       // exactly one of mass_kg / r_g_meters is set
  double r_g_meters = 0.0;
  // atom
  double omega = 100.0;
  double g = 1.0;
  // beam
  double injection_rate_r = 1.0;
  // modes
  std::vector<double> mode_nus;
  int ell = 0;
  // quadrature
  QuadratureConfig quadrature;
  // evolution
  double t_final = 0.0;            // 0 = auto (25 relaxation times)
  double evolve_rel_tol = 1e-10;
  double evolve_abs_tol = 1e-14;
  double kappa_leak = 0.0;         // absolute rate; exclusive with the ratio below
  double kappa_over_gamma_a = 0.0; // per-mode kappa = ratio * Gamma_a
  double tail_threshold = 1e-10;
  int samples = 128;
  // trajectory
  double traj_r_start = 50.0;
  double traj_r_end = 1.01;
  double traj_rel_tol = 1e-10;
  // outputs
  std::string out_directory = "out";
  bool emit_csv = true;
  bool emit_json = true;
  int precision = 17;

  std::string config_hash;  // canonical-form FNV-1a of the parsed document
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key: " + (path.empty() ? it.key() : path + "." + it.key()));
  }
}

inline double require_positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError("validation error at " + path + ": must be a positive finite number");
  return v;
}

inline double require_nonnegative(double v, const std::string& path) {
  if (v < 0.0 || !std::isfinite(v))
    throw ConfigError("validation error at " + path + ": must be a non-negative finite number");
  return v;
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("validation error at " + key + ": " + e.what());
  }
}

// SAX-level duplicate-key rejection via the parser callback: track one key
// set per open object.
inline json parse_strict_json(const std::string& text) {
  std::vector<std::set<std::string>> open_objects;
  auto cb = [&](int, json::parse_event_t ev, json& parsed) -> bool {
    switch (ev) {
      case json::parse_event_t::object_start:
        open_objects.emplace_back();
        break;
      case json::parse_event_t::object_end:
        open_objects.pop_back();
        break;
      case json::parse_event_t::key: {
        std::string key = parsed.get<std::string>();
        if (!open_objects.back().insert(key).second)
          throw ConfigError("duplicate key: " + key);
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
}

inline void apply_override(json& doc, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key.path=value, got: " + assignment);
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = path.find('.', start);
    std::string part = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("--set: empty path component in " + path);
    if (!node->is_object() && !node->is_null())
      throw ConfigError("--set: cannot descend into non-object at " + part + " in " + path);
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

}  // namespace detail

// Parse + validate a scenario document, applying defaults and --set overrides.
// Unknown keys, duplicate keys, and constraint violations raise ConfigError
// with the offending key path.
inline ScenarioConfig parse_config(const std::string& text,
                                   const std::vector<std::string>& overrides = {}) {
  using detail::json;
  json doc = detail::parse_strict_json(text);
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  for (const auto& o : overrides) detail::apply_override(doc, o);

  detail::require_keys(doc, "", {"black_hole", "atom", "beam", "modes", "quadrature",
                                 "evolution", "trajectory", "outputs"});

  ScenarioConfig cfg;

  if (!doc.contains("black_hole") || !doc["black_hole"].is_object())
    throw ConfigError("validation error at black_hole: required object");
  {
    const json& bh = doc["black_hole"];
    detail::require_keys(bh, "black_hole", {"mass_kg", "r_g_meters"});
    bool has_mass = bh.contains("mass_kg"), has_rg = bh.contains("r_g_meters");
    if (has_mass == has_rg)
      throw ConfigError("validation error at black_hole: exactly one of mass_kg, r_g_meters");
    if (has_mass)
      cfg.mass_kg = detail::require_positive(bh["mass_kg"].get<double>(), "black_hole.mass_kg");
    else
      cfg.r_g_meters =
          detail::require_positive(bh["r_g_meters"].get<double>(), "black_hole.r_g_meters");
  }

  if (doc.contains("atom")) {
    const json& a = doc["atom"];
    detail::require_keys(a, "atom", {"omega", "g"});
    cfg.omega = detail::get_or(a, "omega", cfg.omega);
    cfg.g = detail::get_or(a, "g", cfg.g);
  }
  detail::require_positive(cfg.omega, "atom.omega");
  detail::require_positive(cfg.g, "atom.g");

  if (doc.contains("beam")) {
    const json& b = doc["beam"];
    detail::require_keys(b, "beam", {"injection_rate_r"});
    cfg.injection_rate_r = detail::get_or(b, "injection_rate_r", cfg.injection_rate_r);
  }
  detail::require_positive(cfg.injection_rate_r, "beam.injection_rate_r");

  if (!doc.contains("modes") || !doc["modes"].is_object())
    throw ConfigError("validation error at modes: required object");
  {
    const json& m = doc["modes"];
    detail::require_keys(m, "modes", {"nu", "nu_min", "nu_max", "count", "spacing", "ell"});
    bool has_list = m.contains("nu");
    bool has_range = m.contains("nu_min") || m.contains("nu_max") || m.contains("count");
    if (has_list == has_range)
      throw ConfigError("validation error at modes: exactly one of nu, (nu_min,nu_max,count)");
    if (has_list) {
      if (m["nu"].is_number()) {
        cfg.mode_nus.push_back(m["nu"].get<double>());
      } else if (m["nu"].is_array()) {
        for (const auto& v : m["nu"]) cfg.mode_nus.push_back(v.get<double>());
      } else {
        throw ConfigError("validation error at modes.nu: number or array");
      }
    } else {
      double lo = detail::require_positive(detail::get_or(m, "nu_min", 0.0), "modes.nu_min");
      double hi = detail::require_positive(detail::get_or(m, "nu_max", 0.0), "modes.nu_max");
      int count = detail::get_or(m, "count", 0);
      if (count < 1) throw ConfigError("validation error at modes.count: must be >= 1");
      if (!(hi >= lo)) throw ConfigError("validation error at modes.nu_max: must be >= nu_min");
      std::string spacing = detail::get_or<std::string>(m, "spacing", "linear");
      if (spacing != "linear" && spacing != "log")
        throw ConfigError("validation error at modes.spacing: linear or log");
      for (int i = 0; i < count; ++i) {
        double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        cfg.mode_nus.push_back(spacing == "linear" ? lo + (hi - lo) * f
                                                   : lo * std::pow(hi / lo, f));
      }
    }
    cfg.ell = detail::get_or(m, "ell", 0);
    if (cfg.ell < 0) throw ConfigError("validation error at modes.ell: must be >= 0");
  }
  if (cfg.mode_nus.empty()) throw ConfigError("validation error at modes: empty mode grid");
  for (double nu : cfg.mode_nus) detail::require_positive(nu, "modes.nu");

  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    detail::require_keys(q, "quadrature", {"eps_ladder", "x_max", "abs_tol", "rel_tol"});
    if (q.contains("eps_ladder"))
      cfg.quadrature.eps_ladder = q["eps_ladder"].get<std::vector<double>>();
    cfg.quadrature.x_max = detail::get_or(q, "x_max", cfg.quadrature.x_max);
    cfg.quadrature.abs_tol = detail::get_or(q, "abs_tol", cfg.quadrature.abs_tol);
    cfg.quadrature.rel_tol = detail::get_or(q, "rel_tol", cfg.quadrature.rel_tol);
    try {
      cfg.quadrature.validate();
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("validation error at quadrature: ") + e.what());
    }
  }

  if (doc.contains("evolution")) {
    const json& e = doc["evolution"];
    detail::require_keys(e, "evolution",
                         {"t_final", "rel_tol", "abs_tol", "kappa_leak", "kappa_over_gamma_a",
                          "tail_threshold", "samples"});
    cfg.t_final = detail::require_nonnegative(detail::get_or(e, "t_final", cfg.t_final),
                                              "evolution.t_final");
    cfg.evolve_rel_tol = detail::require_positive(
        detail::get_or(e, "rel_tol", cfg.evolve_rel_tol), "evolution.rel_tol");
    cfg.evolve_abs_tol = detail::require_positive(
        detail::get_or(e, "abs_tol", cfg.evolve_abs_tol), "evolution.abs_tol");
    cfg.kappa_leak = detail::require_nonnegative(
        detail::get_or(e, "kappa_leak", cfg.kappa_leak), "evolution.kappa_leak");
    cfg.kappa_over_gamma_a =
        detail::require_nonnegative(detail::get_or(e, "kappa_over_gamma_a", 0.0),
                                    "evolution.kappa_over_gamma_a");
    if (cfg.kappa_leak > 0.0 && cfg.kappa_over_gamma_a > 0.0)
      throw ConfigError(
          "validation error at evolution: kappa_leak and kappa_over_gamma_a are exclusive");
    cfg.tail_threshold = detail::require_positive(
        detail::get_or(e, "tail_threshold", cfg.tail_threshold), "evolution.tail_threshold");
    cfg.samples = detail::get_or(e, "samples", cfg.samples);
    if (cfg.samples < 0) throw ConfigError("validation error at evolution.samples: must be >= 0");
  }

  if (doc.contains("trajectory")) {
    const json& t = doc["trajectory"];
    detail::require_keys(t, "trajectory", {"r_start", "r_end", "rel_tol"});
    cfg.traj_r_start = detail::require_positive(detail::get_or(t, "r_start", cfg.traj_r_start),
                                                "trajectory.r_start");
    cfg.traj_r_end =
        detail::require_positive(detail::get_or(t, "r_end", cfg.traj_r_end), "trajectory.r_end");
    cfg.traj_rel_tol = detail::require_positive(
        detail::get_or(t, "rel_tol", cfg.traj_rel_tol), "trajectory.rel_tol");
    if (!(cfg.traj_r_end > 1.0) || !(cfg.traj_r_start > cfg.traj_r_end))
      throw ConfigError("validation error at trajectory: need 1 < r_end < r_start");
  }

  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    detail::require_keys(o, "outputs", {"directory", "formats", "precision"});
    cfg.out_directory = detail::get_or<std::string>(o, "directory", cfg.out_directory);
    if (o.contains("formats")) {
      cfg.emit_csv = false;
      cfg.emit_json = false;
      for (const auto& f : o["formats"]) {
        std::string s = f.get<std::string>();
        if (s == "csv")
          cfg.emit_csv = true;
        else if (s == "json")
          cfg.emit_json = true;
        else
          throw ConfigError("validation error at outputs.formats: unknown format " + s);
      }
    }
    cfg.precision = detail::get_or(o, "precision", cfg.precision);
    if (cfg.precision != 0 && (cfg.precision < 6 || cfg.precision > 17))
      throw ConfigError("validation error at outputs.precision: 0 or 6..17");
  }

  cfg.config_hash = fnv1a_hex(doc.dump());
  return cfg;
}

}  // namespace hbar
