#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "qlc/bracket.hpp"
#include "qlc/cli.hpp"
#include "qlc/diag.hpp"
#include "qlc/quat.hpp"
#include "qlc/synth.hpp"

using namespace qlc;

namespace {

const std::string kMinimalConfig = R"({
  "plant": {
    "n": 1, "m": 1,
    "B": [[[1, 0, 0, 0]]],
    "C": [[[1, 0, 0, 0]]],
    "D": [[[0, 0, 0, 0]]],
    "K": [[[0.1, 0, 0, 0]]],
    "alpha_s": 1.0,
    "eta0": 0.01,
    "epsilon0": 0.05,
    "x0": [[0.01, 0, 0, 0]]
  },
  "bracket": {"type": "test", "eps_b": 0.1, "epsilon0": 0.5, "antisymmetric": true},
  "constants": {"A": 0.2, "C1": 0.0, "C2": 0.00665}
})";

std::string write_temp(const std::string& name, const std::string& body) {
  std::ofstream out(name);
  out << body;
  return name;
}

std::string error_of(const std::string& path) {
  try {
    load_config(path);
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}

PlantConfig scalar_plant() {
  PlantConfig cfg;
  cfg.n = 1;
  cfg.m = 1;
  cfg.B = HMatrix::identity(1);
  cfg.C = HMatrix::identity(1);
  cfg.D = HMatrix(1, 1);
  cfg.K = HMatrix::scalar(1, Quaternion::real(0.1));
  cfg.bracket = make_test_bracket(0.1, 0.5, 1);
  cfg.constants = bracket_constants(0.2, 0.0, 0.00665, 0.5);
  cfg.alpha_s = 1.0;
  cfg.eta0 = 0.01;
  cfg.epsilon0 = 0.05;
  cfg.x0 = HVector{{0.035355339059327376, 0.035355339059327376, 0.0, 0.0}};
  cfg.s0 = HVector(1);
  return cfg;
}

}  // namespace

TEST_CASE("shipped scalar config loads with every section") {
  LoadedConfig cfg = load_config(QLC_CONFIG_DIR "/test_system.json");
  CHECK(cfg.plant.n == 1);
  CHECK(cfg.plant.m == 1);
  CHECK(cfg.plant.alpha_s == 1.0);
  CHECK(cfg.plant.eta0 == 0.01);
  CHECK(cfg.plant.epsilon0 == 0.05);
  CHECK(cfg.plant.B.at(0, 0).w == 1.0);
  CHECK(cfg.plant.K.at(0, 0).w == 0.1);
  CHECK(hnorm(cfg.plant.x0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(hnorm(cfg.plant.s0) == 0.0);
  CHECK(cfg.plant.bracket.antisymmetric);
  CHECK(cfg.plant.bracket.eps_b == 0.1);
  CHECK(cfg.plant.bracket.epsilon0 == 0.5);
  CHECK(cfg.plant.bracket.dim == 1);
  CHECK(cfg.plant.constants.A == 0.2);
  CHECK(cfg.plant.constants.C2 == 0.00665);
  CHECK(cfg.plant.constants.eps_star_generic == doctest::Approx(0.3125));
  CHECK(cfg.estimate_samples == 50000);
  CHECK(cfg.seed == 1);
  CHECK(cfg.defect_grid.shells == 3);
  CHECK(cfg.defect_grid.directions == 64);
  CHECK(cfg.defect_grid.random_pairs == 256);
  CHECK(cfg.defect_grid.seed == 9001);
  CHECK(cfg.beta_init == 0.5);
  CHECK(cfg.max_halvings == 40);
  CHECK(cfg.cmc_samples == 512);
  CHECK(cfg.cmc_tol == 1e-9);
  CHECK(cfg.gosl_pairs == 10000);
  CHECK(cfg.sim.dt == 0.001);
  CHECK(cfg.sim.t_end == 10.0);
  CHECK(cfg.sim.boundary_layer == 1e-4);
  CHECK(cfg.sim.seed == 7);
  CHECK(cfg.sim.defect_grid.shells == 2);
  CHECK(cfg.sim.defect_grid.directions == 8);
  CHECK(cfg.sim.defect_grid.random_pairs == 0);
  REQUIRE(cfg.expected.count("beta_star") == 1);
  CHECK(cfg.expected.at("beta_star").value == 1.9394);
  CHECK(cfg.expected.at("beta_star").relative);
  REQUIRE(cfg.expected.count("eps_star") == 1);
  CHECK_FALSE(cfg.expected.at("eps_star").relative);
}

TEST_CASE("config rejection paths") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config("definitely_not_here.json"), config_error);
  }
  SUBCASE("minimal config parses") {
    std::string path = write_temp("cli_min.json", kMinimalConfig);
    LoadedConfig cfg = load_config(path);
    CHECK(cfg.plant.n == 1);
    CHECK(cfg.estimate_samples == 50000);
    std::remove(path.c_str());
  }
  SUBCASE("unknown root key is named in the error") {
    std::string body = kMinimalConfig;
    body.insert(body.rfind('}'), ", \"bogus\": 1\n");
    std::string path = write_temp("cli_bogus.json", body);
    std::string msg = error_of(path);
    CHECK(msg.find("unknown key") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
    std::remove(path.c_str());
  }
  SUBCASE("missing required field is named in the error") {
    std::string body = kMinimalConfig;
    std::size_t pos = body.find("\"eta0\": 0.01,");
    REQUIRE(pos != std::string::npos);
    body.erase(pos, std::string("\"eta0\": 0.01,").size());
    std::string path = write_temp("cli_missing.json", body);
    std::string msg = error_of(path);
    CHECK(msg.find("eta0") != std::string::npos);
    std::remove(path.c_str());
  }
  SUBCASE("dimension mismatch is named in the error") {
    std::string body = kMinimalConfig;
    std::size_t pos = body.find("\"B\": [[[1, 0, 0, 0]]]");
    REQUIRE(pos != std::string::npos);
    body.replace(pos, std::string("\"B\": [[[1, 0, 0, 0]]]").size(),
                 "\"B\": [[[1, 0, 0, 0]], [[0, 0, 0, 0]]]");
    std::string path = write_temp("cli_dims.json", body);
    std::string msg = error_of(path);
    CHECK(msg.find("plant.B") != std::string::npos);
    std::remove(path.c_str());
  }
}

TEST_CASE("report rows") {
  Report rep("demo");
  CHECK_THROWS_AS(rep.put("untagged", 1.0, ""), std::logic_error);

  rep.put("plain", 1.5, "a + b");
  rep.put_int("count", 7, "len(xs)");
  rep.put_bool("gate", true, "x > 0");
  CHECK(rep.all_passed());

  Expected abs_exp{2.0, 0.1, false};
  CHECK(rep.put_checked("near", 2.05, "f(x)", abs_exp));
  CHECK_FALSE(rep.put_checked("far", 2.2, "f(x)", abs_exp));
  CHECK(rep.failures() == 1);

  Expected rel_exp{100.0, 0.01, true};
  CHECK(rep.put_checked("rel_near", 100.9, "g(x)", rel_exp));
  CHECK_FALSE(rep.put_checked("rel_far", 101.5, "g(x)", rel_exp));
  CHECK(rep.failures() == 2);

  rep.put_bool("broken_gate", false, "y > 0");
  CHECK(rep.failures() == 3);
  CHECK_FALSE(rep.all_passed());

  std::string text = rep.render_text();
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("f(x)") != std::string::npos);
  CHECK(text.find("demo") != std::string::npos);
}

TEST_CASE("report serialization is deterministic") {
  auto build = [] {
    Report rep("same");
    rep.put("value", 0.125, "x/8");
    rep.put_bool("gate", true, "x > 0");
    return rep.json().dump(2);
  };
  CHECK(build() == build());
}

TEST_CASE("synthesis artifact round trip") {
  PlantConfig cfg = scalar_plant();
  SynthesisResult res = algorithm1(cfg);
  ordered_json doc = synthesis_to_json(cfg, res);
  SynthesisResult back = synthesis_from_json(doc, cfg);

  CHECK(back.M0 == res.M0);
  CHECK(back.eps_star == res.eps_star);
  CHECK(back.rho_eff == res.rho_eff);
  CHECK(back.eta == res.eta);
  CHECK(back.lambda_peak == res.lambda_peak);
  CHECK(back.t_star_max == res.t_star_max);
  CHECK(back.kappa == res.kappa);
  CHECK(back.c_inf == res.c_inf);
  CHECK(back.w_lump == res.w_lump);
  CHECK(back.R_invariance == res.R_invariance);
  CHECK(back.invariance_ok == res.invariance_ok);
  CHECK(back.contraction_ok == res.contraction_ok);
  CHECK(back.halvings == res.halvings);
  CHECK(back.gosl.M0 == res.gosl.M0);
  CHECK(back.gosl.deltabar_max == res.gosl.deltabar_max);
  CHECK(back.gosl.rho_tight == res.gosl.rho_tight);
  CHECK(back.gosl.ell_tight == res.gosl.ell_tight);
  CHECK(back.gosl.r_max == res.gosl.r_max);
  CHECK(back.gosl.rho_tight_small.has_value() ==
        res.gosl.rho_tight_small.has_value());
  CHECK(back.lmi.beta_star == res.lmi.beta_star);
  CHECK(back.lmi.mu_lmi == res.lmi.mu_lmi);
  CHECK(back.lmi.theta == res.lmi.theta);
  CHECK(back.lmi.iterations == res.lmi.iterations);
  CHECK(back.lmi.feasible == res.lmi.feasible);
  CHECK(back.lmi.converged == res.lmi.converged);
  REQUIRE(back.lmi.P_star.rows == res.lmi.P_star.rows);
  double worst = 0.0;
  for (std::size_t i = 0; i < res.lmi.P_star.rows; ++i) {
    for (std::size_t j = 0; j < res.lmi.P_star.cols; ++j) {
      worst = std::max(worst,
                       std::fabs(back.lmi.P_star.at(i, j) - res.lmi.P_star.at(i, j)));
    }
  }
  CHECK(worst == 0.0);
  CHECK(back.audit.size() == res.audit.size());
}
