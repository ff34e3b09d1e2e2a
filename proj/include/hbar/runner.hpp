#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hbar/config.hpp"
#include "hbar/entropy.hpp"
#include "hbar/excitation.hpp"
#include "hbar/format.hpp"
#include "hbar/master_equation.hpp"
#include "hbar/trajectory.hpp"

namespace hbar {

inline constexpr std::string_view artifact_version = "0.1.0";

struct RunParts {
  bool excite = false;
  bool evolve = false;
  bool entropy = false;

  static RunParts all() { return {true, true, true}; }
};

struct ModeResult {
  ModeSpec mode;
  ModeKinetics kin;
  // excite
  ProbabilityResult p_exc_numeric;
  double p_exc_closed = 0.0;
  double p_exc_closed_simplified = 0.0;
  double p_abs_closed = 0.0;
  double rel_diff = 0.0;
  double potential_ratio = 0.0;
  // evolve
  double nbar_steady = 0.0;
  double steady_linf = 0.0;
  double t_final = 0.0;
  std::vector<EvolveSample> evolution;
  FockPopulations final_state;
  // entropy
  double n_dot = 0.0;

  std::string error;  // empty = ok
  bool ran_excite = false;
  bool ran_evolve = false;
};

struct RunChecks {
  double max_rel_diff = 0.0;
  bool all_quadrature_converged = true;
  double max_steady_linf = 0.0;
  double max_area_law_residual = 0.0;
  bool excite_ok = true;
  bool steady_ok = true;
  bool entropy_ok = true;
  bool pass = true;
};

struct EntropyRow {
  double nu = 0.0;  // 0 marks the summed row
  double n_dot = 0.0;
  double m_dot_p = 0.0;
  double A_dot_p = 0.0;
  double S_dot_p = 0.0;
  double S_dot_from_area = 0.0;
  double rel_residual = 0.0;
};

struct RunReport {
  BlackHole bh;
  AtomSpec atom;
  double injection_rate_r = 0.0;
  std::vector<ModeResult> modes;
  std::vector<EntropyRow> entropy_rows;  // per mode, ascending nu
  EntropyRow entropy_total;
  RunChecks checks;
  std::string config_hash;
};

inline constexpr double rel_diff_bound = 2e-2;
inline constexpr double steady_linf_bound = 1e-8;
inline constexpr double area_law_bound = 1e-10;

namespace detail {

inline void compute_mode(const ScenarioConfig& cfg, const AtomSpec& atom, double v_max,
                         const RunParts& parts, ModeResult& out) {
  const ModeSpec& mode = out.mode;
  ModeKinetics base = mode_rates(atom, mode, cfg.injection_rate_r, 0.0);
  double kappa = cfg.kappa_leak > 0.0 ? cfg.kappa_leak
                                      : cfg.kappa_over_gamma_a * base.Gamma_a;
  out.kin = mode_rates(atom, mode, cfg.injection_rate_r, kappa);
  out.potential_ratio = v_max / (mode.nu * mode.nu);

  out.p_exc_closed = excitation_probability_closed_form(atom, mode);
  out.p_exc_closed_simplified =
      excitation_probability_closed_form(atom, mode, ClosedFormVariant::omega_dominant);
  out.p_abs_closed =
      absorption_probability(atom, mode, ProbabilityMethod::closed).value;

  if (parts.excite) {
    out.p_exc_numeric = excitation_probability_numeric(atom, mode, cfg.quadrature);
    out.rel_diff = std::abs(out.p_exc_numeric.value - out.p_exc_closed) / out.p_exc_closed;
    out.ran_excite = true;
  }

  double q = out.kin.Gamma_e / (out.kin.Gamma_a + out.kin.kappa_leak);
  out.nbar_steady = q / (1.0 - q);
  out.n_dot = out.kin.kappa_leak * out.nbar_steady;

  if (parts.evolve) {
    double rate_gap = out.kin.Gamma_a + out.kin.kappa_leak - out.kin.Gamma_e;
    out.t_final = cfg.t_final > 0.0 ? cfg.t_final : 25.0 / rate_gap;
    int levels = geometric_truncation_level(q, 1e-12);
    EvolveOptions eo;
    eo.rel_tol = cfg.evolve_rel_tol;
    eo.abs_tol = cfg.evolve_abs_tol;
    eo.tail_threshold = cfg.tail_threshold;
    eo.samples = cfg.samples;
    EvolveResult ev = evolve(vacuum_state(levels), out.kin, out.t_final, eo);
    out.evolution = std::move(ev.samples);
    out.final_state = std::move(ev.state);
    FockPopulations ss = geometric_state_levels(q, out.final_state.truncation_level());
    double linf = 0.0;
    for (std::size_t n = 0; n < ss.p.size(); ++n)
      linf = std::max(linf, std::abs(out.final_state.p[n] - ss.p[n]));
    out.steady_linf = linf;
    out.ran_evolve = true;
  }
}

}  // namespace detail

// Runs the configured scenario: a deterministic sweep over the mode grid with
// per-mode work items dispatched to a bounded worker pool. Module errors are
// captured per mode; global checks aggregate only over error-free modes.
inline RunReport run_scenario(const ScenarioConfig& cfg, const RunParts& parts = RunParts::all()) {
  RunReport rep;
  rep.bh = cfg.mass_kg > 0.0 ? BlackHole::from_mass(cfg.mass_kg)
                             : BlackHole::from_radius(cfg.r_g_meters);
  rep.atom = AtomSpec{cfg.omega};
  rep.injection_rate_r = cfg.injection_rate_r;
  rep.config_hash = cfg.config_hash;

  std::vector<double> nus(cfg.mode_nus);
  std::sort(nus.begin(), nus.end());
  rep.modes.resize(nus.size());
  for (std::size_t i = 0; i < nus.size(); ++i)
    rep.modes[i].mode = ModeSpec{nus[i], cfg.ell, cfg.g};

  double v_max = potential_peak(cfg.ell).V_max;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= rep.modes.size()) return;
      try {
        detail::compute_mode(cfg, rep.atom, v_max, parts, rep.modes[i]);
      } catch (const std::exception& e) {
        rep.modes[i].error = e.what();
      }
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t n_workers = std::min<std::size_t>(std::max(1u, hw), rep.modes.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunChecks& ck = rep.checks;
  for (const ModeResult& m : rep.modes) {
    if (!m.error.empty()) {
      ck.pass = false;
      continue;
    }
    if (m.ran_excite) {
      ck.max_rel_diff = std::max(ck.max_rel_diff, m.rel_diff);
      ck.all_quadrature_converged = ck.all_quadrature_converged && m.p_exc_numeric.converged;
    }
    if (m.ran_evolve) ck.max_steady_linf = std::max(ck.max_steady_linf, m.steady_linf);
  }

  if (parts.entropy) {
    FluxLedger total;
    for (const ModeResult& m : rep.modes) {
      if (!m.error.empty()) continue;
      EntropyRow row;
      row.nu = m.mode.nu;
      row.n_dot = m.n_dot;
      FluxLedger one{{{m.mode.nu, m.n_dot}}};
      try {
        AreaLawResult law = area_rate_and_entropy_law(one, rep.bh);
        row.m_dot_p = law.m_dot_p;
        row.A_dot_p = law.A_dot_p;
        row.S_dot_p = law.S_dot_flux;
        row.S_dot_from_area = law.S_dot_from_area;
        row.rel_residual = law.rel_residual;
      } catch (const std::exception&) {
        ck.pass = false;
        ck.entropy_ok = false;
      }
      ck.max_area_law_residual = std::max(ck.max_area_law_residual, row.rel_residual);
      rep.entropy_rows.push_back(row);
      total.modes.push_back({m.mode.nu, m.n_dot});
    }
    try {
      AreaLawResult law = area_rate_and_entropy_law(total, rep.bh);
      rep.entropy_total.n_dot = 0.0;
      for (const auto& m : total.modes) rep.entropy_total.n_dot += m.n_dot;
      rep.entropy_total.m_dot_p = law.m_dot_p;
      rep.entropy_total.A_dot_p = law.A_dot_p;
      rep.entropy_total.S_dot_p = law.S_dot_flux;
      rep.entropy_total.S_dot_from_area = law.S_dot_from_area;
      rep.entropy_total.rel_residual = law.rel_residual;
      ck.max_area_law_residual = std::max(ck.max_area_law_residual, law.rel_residual);
    } catch (const std::exception&) {
      ck.pass = false;
      ck.entropy_ok = false;
    }
  }

  if (parts.excite)
    ck.excite_ok = ck.max_rel_diff <= rel_diff_bound && ck.all_quadrature_converged;
  if (parts.evolve) ck.steady_ok = ck.max_steady_linf < steady_linf_bound;
  if (parts.entropy) ck.entropy_ok = ck.entropy_ok && ck.max_area_law_residual < area_law_bound;
  ck.pass = ck.pass && ck.excite_ok && ck.steady_ok && ck.entropy_ok;
  return rep;
}

namespace detail {

inline int effective_precision(const ScenarioConfig& cfg) {
  return cfg.precision >= 17 || cfg.precision == 0 ? 0 : cfg.precision;
}

}  // namespace detail

inline std::string render_excite_csv(const RunReport& rep, const ScenarioConfig& cfg) {
  CsvBuilder csv("excite v1",
                 {"omega", "nu", "xi", "P_exc_numeric", "P_exc_err", "P_exc_closed",
                  "P_abs_closed", "rel_diff"},
                 detail::effective_precision(cfg));
  for (const ModeResult& m : rep.modes) {
    if (!m.error.empty() || !m.ran_excite) continue;
    csv.add_row({rep.atom.omega, m.mode.nu, m.mode.xi(), m.p_exc_numeric.value,
                 m.p_exc_numeric.err_estimate, m.p_exc_closed, m.p_abs_closed, m.rel_diff});
  }
  return csv.str();
}

inline std::string render_evolve_csv(const ModeResult& m, const ScenarioConfig& cfg) {
  CsvBuilder csv("evolve v1", {"t", "n_mean", "S_over_kB", "residual", "total_prob"},
                 detail::effective_precision(cfg));
  for (const EvolveSample& s : m.evolution)
    csv.add_row({s.t, s.n_mean, s.entropy_kB, s.residual, s.total_prob});
  return csv.str();
}

inline std::string render_steady_csv(const ModeResult& m, const ScenarioConfig& cfg) {
  CsvBuilder csv("steady v1", {"n", "p_n"}, detail::effective_precision(cfg));
  double q = m.kin.Gamma_e / (m.kin.Gamma_a + m.kin.kappa_leak);
  FockPopulations ss = geometric_state_levels(
      q, m.final_state.p.empty() ? geometric_truncation_level(q, 1e-12)
                                 : m.final_state.truncation_level());
  for (std::size_t n = 0; n < ss.p.size(); ++n)
    csv.add_row({static_cast<double>(n), ss.p[n]});
  return csv.str();
}

inline std::string render_entropy_csv(const RunReport& rep, const ScenarioConfig& cfg) {
  CsvBuilder csv("entropy v1", {"nu", "n_dot", "S_dot_p", "A_dot_p", "S_dot_from_area"},
                 detail::effective_precision(cfg));
  for (const EntropyRow& r : rep.entropy_rows)
    csv.add_row({r.nu, r.n_dot, r.S_dot_p, r.A_dot_p, r.S_dot_from_area});
  return csv.str();
}

inline std::string render_trajectory_csv(const GeodesicResult& g, const ScenarioConfig& cfg) {
  CsvBuilder csv("trajectory v1", {"r", "tau", "t", "r_star"},
                 detail::effective_precision(cfg));
  for (const GeodesicSample& s : g.samples) csv.add_row({s.r, s.tau, s.t, s.r_star});
  return csv.str();
}

inline std::string render_report_json(const RunReport& rep, const ScenarioConfig& cfg) {
  using J = nlohmann::ordered_json;
  J doc;
  doc["schema"] = "report v1";
  doc["provenance"] = {{"config_hash", rep.config_hash},
                       {"constants", std::string(constants_version)},
                       {"version", std::string(artifact_version)}};
  doc["black_hole"] = {{"mass_kg", rep.bh.mass_kg},
                       {"r_g_m", rep.bh.r_g_m},
                       {"area_m2", rep.bh.area_m2},
                       {"T_H_K", rep.bh.T_H_K}};
  doc["atom"] = {{"omega", rep.atom.omega}};
  doc["beam"] = {{"injection_rate_r", rep.injection_rate_r}};

  const RunChecks& ck = rep.checks;
  doc["checks"] = {{"max_rel_diff", ck.max_rel_diff},
                   {"rel_diff_bound", rel_diff_bound},
                   {"all_quadrature_converged", ck.all_quadrature_converged},
                   {"max_steady_linf", ck.max_steady_linf},
                   {"steady_linf_bound", steady_linf_bound},
                   {"max_area_law_residual", ck.max_area_law_residual},
                   {"area_law_bound", area_law_bound},
                   {"excite_ok", ck.excite_ok},
                   {"steady_ok", ck.steady_ok},
                   {"entropy_ok", ck.entropy_ok},
                   {"pass", ck.pass}};

  J modes = J::array();
  for (const ModeResult& m : rep.modes) {
    J jm;
    jm["nu"] = m.mode.nu;
    jm["xi"] = m.mode.xi();
    jm["ell"] = m.mode.ell;
    jm["g"] = m.mode.g;
    jm["status"] = m.error.empty() ? "ok" : m.error;
    if (!m.error.empty()) {
      modes.push_back(jm);
      continue;
    }
    if (m.ran_excite) {
      jm["P_exc_numeric"] = m.p_exc_numeric.value;
      jm["P_exc_err"] = m.p_exc_numeric.err_estimate;
      jm["P_exc_converged"] = m.p_exc_numeric.converged;
      jm["perturbative"] = m.p_exc_numeric.perturbative;
      jm["rel_diff"] = m.rel_diff;
    }
    jm["P_exc_closed"] = m.p_exc_closed;
    jm["P_exc_closed_simplified"] = m.p_exc_closed_simplified;
    jm["P_abs_closed"] = m.p_abs_closed;
    jm["Gamma_e"] = m.kin.Gamma_e;
    jm["Gamma_a"] = m.kin.Gamma_a;
    jm["kappa_leak"] = m.kin.kappa_leak;
    jm["R"] = m.kin.R;
    jm["nbar_steady"] = m.nbar_steady;
    if (m.ran_evolve) {
      jm["steady_linf"] = m.steady_linf;
      jm["t_final"] = m.t_final;
    }
    jm["n_dot"] = m.n_dot;
    jm["potential_validity_ratio"] = m.potential_ratio;
    modes.push_back(jm);
  }
  doc["modes"] = modes;

  auto row_json = [](const EntropyRow& r, bool with_nu) {
    J jr;
    if (with_nu) jr["nu"] = r.nu;
    jr["n_dot"] = r.n_dot;
    jr["m_dot_p"] = r.m_dot_p;
    jr["A_dot_p"] = r.A_dot_p;
    jr["S_dot_p"] = r.S_dot_p;
    jr["S_dot_from_area"] = r.S_dot_from_area;
    return jr;
  };
  if (!rep.entropy_rows.empty()) {
    J per_mode = J::array();
    for (const EntropyRow& r : rep.entropy_rows) per_mode.push_back(row_json(r, true));
    doc["entropy"] = {{"per_mode", per_mode}, {"total", row_json(rep.entropy_total, false)}};
  }
  return doc.dump(2) + "\n";
}

// Writes the selected outputs atomically into cfg.out_directory.
inline std::vector<std::filesystem::path> emit_outputs(const RunReport& rep,
                                                       const ScenarioConfig& cfg,
                                                       const RunParts& parts) {
  namespace fs = std::filesystem;
  fs::path dir(cfg.out_directory);
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto put = [&](const fs::path& name, const std::string& content) {
    atomic_write_file(dir / name, content);
    written.push_back(dir / name);
  };

  if (cfg.emit_csv) {
    if (parts.excite) put("excite.csv", render_excite_csv(rep, cfg));
    if (parts.evolve) {
      for (std::size_t i = 0; i < rep.modes.size(); ++i) {
        if (!rep.modes[i].ran_evolve || !rep.modes[i].error.empty()) continue;
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_%03zu.csv", i);
        put(std::string("evolve") + suffix, render_evolve_csv(rep.modes[i], cfg));
        put(std::string("steady") + suffix, render_steady_csv(rep.modes[i], cfg));
      }
    }
    if (parts.entropy) put("entropy.csv", render_entropy_csv(rep, cfg));
  }
  if (cfg.emit_json) put("report.json", render_report_json(rep, cfg));
  return written;
}

}  // namespace hbar
