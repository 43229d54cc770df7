/* End-to-end gate: one numbered verdict line per contract item, nonzero exit
 * when any item fails. Tolerances are pinned here, not read from config. */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "oracles.hpp"
#include "qlc/bracket.hpp"
#include "qlc/cohomo.hpp"
#include "qlc/gosl.hpp"
#include "qlc/lyap.hpp"
#include "qlc/quat.hpp"
#include "qlc/realrep.hpp"
#include "qlc/rng.hpp"
#include "qlc/sim.hpp"
#include "qlc/synth.hpp"

using namespace qlc;

namespace {

int g_failures = 0;

void verdict(int idx, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", idx, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int idx, const std::function<void(int)>& body) {
  try {
    body(idx);
  } catch (const std::exception& e) {
    verdict(idx, false, std::string("exception: ") + e.what());
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

bool within_rel(double value, double target, double rel) {
  return std::fabs(value - target) <= rel * std::fabs(target);
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

void criterion_jacobiator(int idx) {
  BracketSpec spec = make_test_bracket(0.1, 0.5, 1);
  HVector x(1), y(1), z(1);
  x[0] = Quaternion(1.0, 1.0, 0.0, 0.0);
  y[0] = Quaternion(0.0, 0.0, 1.0, 0.0);
  z[0] = Quaternion(0.0, 0.0, 0.0, 1.0);

  HVector J = jacobiator(spec, x, y, z, 0.0);
  double err = std::fabs(J[0].w) + std::fabs(J[0].x - 0.04) +
               std::fabs(J[0].y) + std::fabs(J[0].z);

  HVector xi(1);
  xi[0] = Quaternion(0.0, 1.0, 0.0, 0.0);
  HVector J0 = jacobiator(spec, xi, y, z, 0.0);
  bool basis_zero = J0[0].w == 0.0 && J0[0].x == 0.0 && J0[0].y == 0.0 &&
                    J0[0].z == 0.0;

  Clock::time_point t0 = Clock::now();
  double sink = 0.0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) sink += jacobiator(spec, x, y, z, 0.0)[0].x;
  double avg_ms = seconds_since(t0) * 1000.0 / reps;

  bool pass = err <= 1e-12 && basis_zero && avg_ms < 1.0 && sink > 0.0;
  verdict(idx, pass,
          fmt("J(1+i,j,k) err %.2e, J(i,j,k) zero exact, %.4f ms/call", err,
              avg_ms));
}

void criterion_estimates(int idx) {
  BracketSpec spec = make_test_bracket(0.1, 0.5, 1);
  Clock::time_point t0 = Clock::now();
  double a = estimate_A(spec, 50000, 1, 4);
  double six_c2 = 6.0 * estimate_C2(spec, 50000, 1, 4);
  double elapsed = seconds_since(t0);
  bool pass = within_rel(a, 0.2, 0.01) && within_rel(six_c2, 0.0399, 0.05) &&
              elapsed < 10.0;
  verdict(idx, pass,
          fmt("A est %.6f (target 0.2 / 1%%), 6C2 est %.6f (target 0.0399 / "
              "5%%), %.1f s",
              a, six_c2, elapsed));
}

void criterion_radius(int idx) {
  BracketConstants bc = bracket_constants(0.2, 0.0, 0.00665, 0.5);
  bool pass = bc.eps_star_generic == 0.3125 && bc.eps_star_antisym == 0.5;
  verdict(idx, pass,
          fmt("generic %.10g (want 0.3125 exact), antisymmetric %.10g (want "
              "0.5 exact)",
              bc.eps_star_generic, bc.eps_star_antisym));
}

void criterion_constants_table(int idx) {
  CncBundle nc = make_cnc_bundle(0.00665, 0.3125);
  GoslConstants g = gosl_constants(0.00665, nc.cnc, 0.1, 0.3125);
  bool pass = g.r_max <= 1.36e-3 && within_rel(g.r_max, 1.36e-3, 0.02) &&
              within_rel(g.deltabar_max, 6.79e-4, 0.02) &&
              within_rel(g.rho_tight, 0.0202, 0.02) &&
              within_rel(g.ell_tight, 2.72e-3, 0.02) &&
              within_rel(nc.cnc, 0.0798, 0.02) &&
              within_rel(nc.omega_op, 0.0166, 0.02);
  verdict(idx, pass,
          fmt("r_max %.4e, deltabar %.4e, rho %.6f vs ref table (2%% each)",
              g.r_max, g.deltabar_max, g.rho_tight) +
              fmt(", ell %.4e, c_nc %.4f, omega_op %.4f", g.ell_tight, nc.cnc,
                  nc.omega_op));
}

void criterion_norm_transfer(int idx) {
  Clock::time_point t0 = Clock::now();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    CounterRng rng = CounterRng::for_sample(2025, 1000 + k);
    std::size_t size = 1 + static_cast<std::size_t>(k % 3);
    HMatrix T(size, size);
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        T.at(i, j) = Quaternion(rng.next_gaussian(), rng.next_gaussian(),
                                rng.next_gaussian(), rng.next_gaussian());
      }
    }
    double via_phi = op_norm(phi_mat(T));
    double via_conj = op_norm(real_matrix_of(conjugate_operator(T), size));
    worst = std::max(worst, std::fabs(via_phi - via_conj));
  }
  double elapsed = seconds_since(t0);
  bool pass = worst <= 1e-10 && elapsed < 5.0;
  verdict(idx, pass,
          fmt("100 operators up to 3x3, worst norm gap %.2e (cap 1e-10), %.2f s",
              worst, elapsed));
}

void criterion_lmi(int idx) {
  LmiProblem prob;
  prob.A_real = phi_mat(HMatrix::scalar(1, Quaternion::real(-1.0)));
  prob.rho_eff = 0.0202;
  prob.mu_Y = 0.0101;
  LmiSolution sol = iterate_lmi(prob, 0.5);
  RealMat gap = sol.P_star - RealMat::identity(4);
  bool scalar_ok = sol.feasible && std::fabs(sol.beta_star - 1.9394) <= 1e-6 &&
                   std::fabs(sol.mu_lmi - 1.0) <= 1e-6 && max_abs(gap) <= 1e-6 &&
                   sol.iterations == 1;

  double worst = 0.0;
  bool all_feasible = true;
  for (int inst = 0; inst < 5; ++inst) {
    CounterRng rng = CounterRng::for_sample(2024, inst);
    std::vector<double> diag(8);
    RealMat A(8, 8);
    double dmin = 1e300, dmax = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      diag[i] = -(0.5 + 2.5 * rng.next_double());
      A.at(i, i) = diag[i];
      dmin = std::min(dmin, -diag[i]);
      dmax = std::max(dmax, -diag[i]);
    }
    LmiProblem p;
    p.A_real = A;
    p.rho_eff = 0.02;
    p.mu_Y = 0.01;
    p.mu_k = 2.0 * dmax / dmin;
    LmiSolution s = solve_lmi(p);
    all_feasible = all_feasible && s.feasible;
    double th = theta(p.mu_k, p.mu_Y, p.rho_eff);
    double scan = oracle::diag_lmi_max_beta(diag, th, p.mu_k, 1e-4);
    worst = std::max(worst, std::fabs(s.beta_star - scan));
  }
  bool scan_ok = all_feasible && worst <= 1e-4 + 1e-9;

  verdict(idx, scalar_ok && scan_ok,
          fmt("beta* %.10f (want 1.9394 / 1e-6), iters %.0f, ",
              sol.beta_star, static_cast<double>(sol.iterations)) +
              fmt("scan gap %.2e on 5 diagonal 8x8 (cap 1e-4)", worst));
}

void criterion_kappa(int idx) {
  SynthesisResult res = algorithm1(scalar_plant());
  SpectralData eig = sym_eig(res.lmi.P_star, false);
  double lam_min = eig.eigenvalues.front();
  double margin = res.lmi.beta_star * lam_min;
  bool pass = within_rel(res.kappa, 0.03, 0.10) && margin > res.kappa &&
              res.invariance_ok;
  verdict(idx, pass,
          fmt("kappa %.6f (target 0.03 / 10%%), beta* lam_min(P*) %.4f > kappa",
              res.kappa, margin));
}

void criterion_gosl(int idx) {
  Clock::time_point t0 = Clock::now();
  BracketSpec spec = make_test_bracket(0.1, 0.5, 1);
  CncBundle nc = make_cnc_bundle(0.00665, 0.3125);
  GoslConstants g = gosl_constants(0.00665, nc.cnc, 0.1, 0.3125);
  GoslReport rep = verify_gosl(spec, HMatrix::identity(1), g, 10000, 5, 4);
  double elapsed = seconds_since(t0);
  bool pass = rep.pairs == 10000 && rep.violations == 0 && elapsed < 60.0;
  verdict(idx, pass,
          fmt("10000 pairs in the 0.1-ball, %.0f violations, max slack %.2e, ",
              static_cast<double>(rep.violations), rep.max_slack) +
              fmt("%.1f s", elapsed));
}

void criterion_simulation(int idx) {
  Clock::time_point t0 = Clock::now();
  SimConfig sim;

  PlantConfig reduced_cfg = scalar_plant();
  SynthesisResult synth = algorithm1(reduced_cfg);
  Trajectory red = integrate_reduced(reduced_cfg, synth, sim);
  EnvelopeReport env = envelope_check(red, synth.lmi.beta_star, synth.c_inf);

  PlantConfig loop_cfg = scalar_plant();
  loop_cfg.s0[0] = Quaternion(0.005, 0.0, 0.0, 0.0);
  SynthesisResult synth2 = algorithm1(loop_cfg);
  Trajectory cl = integrate_closed_loop(loop_cfg, synth2, sim);
  double reach_cap = hnorm(loop_cfg.s0) / loop_cfg.eta0 + 2.0 * sim.dt;

  double elapsed = seconds_since(t0);
  bool pass = env.pass && !red.diverged && !cl.diverged &&
              cl.reaching_time > 0.0 && cl.reaching_time <= reach_cap &&
              elapsed < 30.0;
  verdict(idx, pass,
          fmt("envelope violations %.0f over [0,10], reach %.3f s (cap %.3f), ",
              static_cast<double>(env.violations), cl.reaching_time,
              reach_cap) +
              fmt("%.1f s wall", elapsed));
}

void criterion_cmc(int idx) {
  BracketSpec spec = make_test_bracket(0.1, 0.5, 1);
  CmcReport pos = cmc_check(spec, HMatrix::identity(1), 0.3125, 512, 11, 1e-9);

  BracketSpec mismatch = make_second_coordinate_bracket(0.1, 0.5);
  HMatrix narrow(2, 1);
  narrow.at(0, 0) = Quaternion::real(1.0);
  CmcReport neg = cmc_check(mismatch, narrow, 0.3125, 512, 11, 1e-9);

  bool pass = pos.pass && pos.max_residual_rel == 0.0 && !neg.pass &&
              neg.max_residual_rel > 1e-9;
  verdict(idx, pass,
          fmt("matched plant residual %.2e (want 0), mismatch residual %.2e "
              "(want > 1e-9)",
              pos.max_residual_rel, neg.max_residual_rel));
}

}  // namespace

int main() {
  run(1, criterion_jacobiator);
  run(2, criterion_estimates);
  run(3, criterion_radius);
  run(4, criterion_constants_table);
  run(5, criterion_norm_transfer);
  run(6, criterion_lmi);
  run(7, criterion_kappa);
  run(8, criterion_gosl);
  run(9, criterion_simulation);
  run(10, criterion_cmc);
  std::printf("acceptance: %d/10 passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
