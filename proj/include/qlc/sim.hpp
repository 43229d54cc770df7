#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlc/gosl.hpp"
#include "qlc/synth.hpp"

namespace qlc {

struct SimConfig {
  double dt = 1e-3;
  double t_end = 10.0;
  double boundary_layer = 1e-4;
  GridConfig defect_grid{2, 8, 0, 9001}; /* reduced in-loop search grid */
  std::uint64_t seed = 7;
  double divergence_factor = 10.0; /* abort when ||x|| exceeds factor * eps* */
};

struct Trajectory {
  std::vector<double> times;
  std::vector<HVector> states;
  std::vector<HVector> sliding;
  std::vector<HVector> controls;
  std::vector<double> lyapunov;   /* x^T Phi(P*) x along the reduced flow */
  double reaching_time = -1.0;    /* first t with ||s|| inside the layer */
  bool diverged = false;
};

/* fixed-step 4th order Runge-Kutta on the augmented state (x, integral of
 * the nominal output drift); the defect entering the plant and the one the
 * controller compensates come from the same grid selection */
Trajectory integrate_closed_loop(const PlantConfig& cfg, const SynthesisResult& synth,
                                 const SimConfig& sim);

/* reduced flow x' = A_s x + delta(x, t) + w_r with a constant worst-case
 * disturbance along a seeded direction; records the Lyapunov value per step */
Trajectory integrate_reduced(const PlantConfig& cfg, const SynthesisResult& synth,
                             const SimConfig& sim);

struct EnvelopeReport {
  bool pass = false;
  std::size_t steps = 0;
  std::size_t violations = 0;
  double max_excess = 0.0; /* worst V(t) - envelope(t) over the horizon */
};

/* checks V(t) <= exp(-beta* t) V(0) + C_inf / beta* + slack at every step,
 * slack = 1e-6 V(0) + 1e-3 dt covers integrator truncation */
EnvelopeReport envelope_check(const Trajectory& traj, double beta_star, double c_inf);

void write_csv(const std::string& path, const Trajectory& traj, int n, int m);

}  // namespace qlc
