#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hbar/runner.hpp"

using namespace hbar;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "black_hole": {"mass_kg": 1.98892e30},
  "atom": {"omega": 100.0},
  "modes": {"nu": [1.0, 0.5]},
  "evolution": {"kappa_over_gamma_a": 1e-3, "samples": 8}
})";

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("run_scenario end to end") {
  ScenarioConfig cfg = parse_config(kSmall);
  RunReport rep = run_scenario(cfg);

  SECTION("modes processed in ascending nu regardless of input order") {
    REQUIRE(rep.modes.size() == 2);
    CHECK(rep.modes[0].mode.nu == 0.5);
    CHECK(rep.modes[1].mode.nu == 1.0);
    CHECK(rep.modes[0].error.empty());
    CHECK(rep.modes[1].error.empty());
  }

  SECTION("internal checks all pass on the default physics") {
    CHECK(rep.checks.excite_ok);
    CHECK(rep.checks.steady_ok);
    CHECK(rep.checks.entropy_ok);
    CHECK(rep.checks.pass);
    CHECK(rep.checks.max_rel_diff < rel_diff_bound);
    CHECK(rep.checks.max_steady_linf < steady_linf_bound);
    CHECK(rep.checks.max_area_law_residual < area_law_bound);
  }

  SECTION("mode results are consistent across modules") {
    const ModeResult& m = rep.modes[0];
    CHECK(m.p_exc_numeric.value ==
          Catch::Approx(excitation_probability_numeric(rep.atom, m.mode, cfg.quadrature).value)
              .epsilon(1e-12));
    // kappa = ratio * Gamma_a at kappa = 0.
    ModeKinetics base = mode_rates(rep.atom, m.mode, cfg.injection_rate_r);
    CHECK(m.kin.kappa_leak == Catch::Approx(1e-3 * base.Gamma_a).epsilon(1e-14));
    // n_dot is the leak flux of the stationary state.
    double q = m.kin.Gamma_e / (m.kin.Gamma_a + m.kin.kappa_leak);
    CHECK(m.n_dot == Catch::Approx(m.kin.kappa_leak * q / (1.0 - q)).epsilon(1e-13));
    CHECK(m.evolution.size() == 9);  // samples + t = 0
  }

  SECTION("entropy rows per mode plus total") {
    REQUIRE(rep.entropy_rows.size() == 2);
    CHECK(rep.entropy_rows[0].nu == 0.5);
    CHECK(rep.entropy_total.n_dot ==
          Catch::Approx(rep.entropy_rows[0].n_dot + rep.entropy_rows[1].n_dot).epsilon(1e-13));
    CHECK(rep.entropy_total.S_dot_p ==
          Catch::Approx(rep.entropy_rows[0].S_dot_p + rep.entropy_rows[1].S_dot_p)
              .epsilon(1e-12));
  }
}

TEST_CASE("run_scenario with excite part only") {
  ScenarioConfig cfg = parse_config(kSmall);
  RunParts parts;
  parts.excite = true;
  RunReport rep = run_scenario(cfg, parts);
  CHECK(rep.modes[0].ran_excite);
  CHECK(!rep.modes[0].ran_evolve);
  CHECK(rep.modes[0].evolution.empty());
  CHECK(rep.checks.steady_ok);  // not evaluated, stays true
  CHECK(rep.checks.pass);
  CHECK(rep.entropy_rows.empty());
}

TEST_CASE("renderers are deterministic and carry the pinned schemas") {
  ScenarioConfig cfg = parse_config(kSmall);
  RunReport rep = run_scenario(cfg);

  std::string excite1 = render_excite_csv(rep, cfg);
  std::string excite2 = render_excite_csv(rep, cfg);
  CHECK(excite1 == excite2);
  CHECK(excite1.rfind("# schema: excite v1\n", 0) == 0);
  CHECK(excite1.find("omega,nu,xi,P_exc_numeric,P_exc_err,P_exc_closed,P_abs_closed,rel_diff\n") !=
        std::string::npos);

  std::string evolve_csv = render_evolve_csv(rep.modes[0], cfg);
  CHECK(evolve_csv.rfind("# schema: evolve v1\n", 0) == 0);
  CHECK(evolve_csv.find("t,n_mean,S_over_kB,residual,total_prob\n") != std::string::npos);

  std::string steady_csv = render_steady_csv(rep.modes[0], cfg);
  CHECK(steady_csv.rfind("# schema: steady v1\n", 0) == 0);

  std::string entropy_csv = render_entropy_csv(rep, cfg);
  CHECK(entropy_csv.rfind("# schema: entropy v1\n", 0) == 0);
  CHECK(entropy_csv.find("nu,n_dot,S_dot_p,A_dot_p,S_dot_from_area\n") != std::string::npos);

  std::string report = render_report_json(rep, cfg);
  CHECK(report == render_report_json(rep, cfg));
  auto doc = nlohmann::json::parse(report);
  CHECK(doc["schema"] == "report v1");
  CHECK(doc["provenance"]["config_hash"] == cfg.config_hash);
  CHECK(doc["provenance"]["constants"] == "CODATA-2018");
  CHECK(doc["checks"]["pass"].get<bool>());
  CHECK(doc["modes"].size() == 2);
  CHECK(doc["entropy"]["per_mode"].size() == 2);
  CHECK(doc["entropy"]["total"].contains("S_dot_from_area"));
}

TEST_CASE("precision cap applies to CSV output") {
  ScenarioConfig cfg = parse_config(kSmall, {"outputs.precision=8"});
  GeodesicResult g;
  g.samples.push_back({1.0 / 3.0, 2.0 / 3.0, 1.0, 2.0});
  std::string csv = render_trajectory_csv(g, cfg);
  CHECK(csv.find("0.33333333,") != std::string::npos);
  CHECK(csv.find("0.3333333333") == std::string::npos);

  ScenarioConfig full = parse_config(kSmall);
  std::string csv17 = render_trajectory_csv(g, full);
  CHECK(csv17.find("0.3333333333333333,") != std::string::npos);
}

TEST_CASE("emit_outputs writes the expected file set") {
  fs::path dir = fs::temp_directory_path() / "hbar_test_emit";
  fs::remove_all(dir);
  ScenarioConfig cfg = parse_config(kSmall);
  cfg.out_directory = (dir / "a").string();
  RunReport rep = run_scenario(cfg);
  auto files = emit_outputs(rep, cfg, RunParts::all());

  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(f.filename().string());
  CHECK(std::find(names.begin(), names.end(), "excite.csv") != names.end());
  CHECK(std::find(names.begin(), names.end(), "evolve_000.csv") != names.end());
  CHECK(std::find(names.begin(), names.end(), "evolve_001.csv") != names.end());
  CHECK(std::find(names.begin(), names.end(), "steady_000.csv") != names.end());
  CHECK(std::find(names.begin(), names.end(), "entropy.csv") != names.end());
  CHECK(std::find(names.begin(), names.end(), "report.json") != names.end());

  SECTION("second emission into a fresh directory is byte-identical") {
    ScenarioConfig cfg2 = cfg;
    cfg2.out_directory = (dir / "b").string();
    emit_outputs(rep, cfg2, RunParts::all());
    for (const auto& name : names) {
      CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    }
  }
  fs::remove_all(dir);
}
