#include "qlc/sim.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <iomanip>

#include "qlc/diag.hpp"
#include "qlc/rng.hpp"

namespace qlc {

namespace {

double quadratic_form(const RealMat& P, const HVector& x) {
  RealVec v = phi_vec(x);
  RealVec pv = P * v;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * pv[i];
  return s;
}

/* plant state plus the accumulated nominal output drift */
struct Aug {
  HVector x;
  HVector acc;
};

Aug axpy(const Aug& a, const Aug& d, double h) {
  Aug out;
  out.x = a.x + d.x * h;
  out.acc = a.acc + d.acc * h;
  return out;
}

}  // namespace

Trajectory integrate_closed_loop(const PlantConfig& cfg, const SynthesisResult& synth,
                                 const SimConfig& sim) {
  const std::size_t m = static_cast<std::size_t>(cfg.m);
  const double eps_star = synth.eps_star;
  const RealMat& P = synth.lmi.P_star;

  HVector w(m);
  if (cfg.w_max > 0.0) {
    CounterRng rng(sim.seed);
    w = rng.unit_hvector(m) * cfg.w_max;
  }
  const HVector dw = hmat_vec(cfg.D, w);
  const HVector c_dw = hmat_vec(cfg.C, dw);
  const HVector cx0 = hmat_vec(cfg.C, cfg.x0);

  auto sliding_of = [&](const Aug& a) {
    return hmat_vec(cfg.C, a.x) - cx0 - a.acc + cfg.s0;
  };

  HVector last_u(m);
  auto deriv = [&](const Aug& a, double t) {
    DefectSelection sel = defect(cfg.bracket, cfg.B, a.x, t, eps_star,
                                 sim.defect_grid);
    HVector s = sliding_of(a);
    HVector u = control(cfg, sel, s, synth.eta, sim.boundary_layer);
    last_u = u;
    Aug d;
    d.x = sel.value + hmat_vec(cfg.B, u) + dw;
    d.acc = c_dw;
    return d;
  };

  Trajectory traj;
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(sim.t_end / sim.dt));
  Aug a{cfg.x0, HVector(m)};

  for (std::size_t k = 0; k <= steps; ++k) {
    double t = k * sim.dt;
    Aug k1 = deriv(a, t);
    HVector s = sliding_of(a);

    traj.times.push_back(t);
    traj.states.push_back(a.x);
    traj.sliding.push_back(s);
    traj.controls.push_back(last_u);
    traj.lyapunov.push_back(quadratic_form(P, a.x));
    if (traj.reaching_time < 0.0 && hnorm(s) <= sim.boundary_layer) {
      traj.reaching_time = t;
    }
    if (hnorm(a.x) > sim.divergence_factor * eps_star) {
      traj.diverged = true;
      break;
    }
    if (k == steps) break;

    const double h = sim.dt;
    Aug k2 = deriv(axpy(a, k1, 0.5 * h), t + 0.5 * h);
    Aug k3 = deriv(axpy(a, k2, 0.5 * h), t + 0.5 * h);
    Aug k4 = deriv(axpy(a, k3, h), t + h);
    Aug sum;
    sum.x = k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x;
    sum.acc = k1.acc + 2.0 * k2.acc + 2.0 * k3.acc + k4.acc;
    a = axpy(a, sum, h / 6.0);
  }
  return traj;
}

Trajectory integrate_reduced(const PlantConfig& cfg, const SynthesisResult& synth,
                             const SimConfig& sim) {
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  const std::size_t m = static_cast<std::size_t>(cfg.m);
  const double eps_star = synth.eps_star;
  const RealMat& P = synth.lmi.P_star;

  HMatrix A_s =
      HMatrix::scalar(n, Quaternion::real(-cfg.alpha_s));

  HVector w_r(n);
  if (synth.w_lump > 0.0) {
    CounterRng rng(sim.seed + 1);
    w_r = rng.unit_hvector(n) * synth.w_lump;
  }

  auto deriv = [&](const HVector& x, double t) {
    DefectSelection sel = defect(cfg.bracket, cfg.B, x, t, eps_star,
                                 sim.defect_grid);
    return hmat_vec(A_s, x) + sel.value + w_r;
  };

  Trajectory traj;
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(sim.t_end / sim.dt));
  HVector x = cfg.x0;
  const HVector zero_m(m);

  for (std::size_t k = 0; k <= steps; ++k) {
    double t = k * sim.dt;
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.sliding.push_back(zero_m);
    traj.controls.push_back(zero_m);
    traj.lyapunov.push_back(quadratic_form(P, x));
    if (hnorm(x) > sim.divergence_factor * eps_star) {
      traj.diverged = true;
      break;
    }
    if (k == steps) break;

    const double h = sim.dt;
    HVector k1 = deriv(x, t);
    HVector k2 = deriv(x + k1 * (0.5 * h), t + 0.5 * h);
    HVector k3 = deriv(x + k2 * (0.5 * h), t + 0.5 * h);
    HVector k4 = deriv(x + k3 * h, t + h);
    x = x + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
  }
  return traj;
}

EnvelopeReport envelope_check(const Trajectory& traj, double beta_star,
                              double c_inf) {
  if (!(beta_star > 0.0)) throw precondition_error("decay rate must be positive");
  EnvelopeReport report;
  report.steps = traj.times.size();
  if (traj.times.empty()) return report;

  const double v0 = traj.lyapunov.front();
  const double dt =
      traj.times.size() > 1 ? traj.times[1] - traj.times[0] : 0.0;
  const double slack = 1e-6 * v0 + 1e-3 * dt;
  const double floor = c_inf / beta_star;

  double max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    double env = std::exp(-beta_star * traj.times[k]) * v0 + floor + slack;
    double excess = traj.lyapunov[k] - env;
    max_excess = std::max(max_excess, excess);
    if (excess > 0.0) ++report.violations;
  }
  report.max_excess = max_excess;
  report.pass = report.violations == 0 && !traj.diverged;
  return report;
}

void write_csv(const std::string& path, const Trajectory& traj, int n, int m) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open output file: " + path);
  out << std::setprecision(17);

  out << "t";
  const char* comp[4] = {"w", "x", "y", "z"};
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 4; ++c) out << ",x" << i << "_" << comp[c];
  }
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < 4; ++c) out << ",s" << i << "_" << comp[c];
  }
  out << ",V\n";

  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    const HVector& x = traj.states[k];
    for (std::size_t i = 0; i < x.size(); ++i) {
      out << "," << x[i].w << "," << x[i].x << "," << x[i].y << "," << x[i].z;
    }
    const HVector& s = traj.sliding[k];
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << "," << s[i].w << "," << s[i].x << "," << s[i].y << "," << s[i].z;
    }
    out << "," << traj.lyapunov[k] << "\n";
  }
}

}  // namespace qlc
