#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qlc/bracket.hpp"
#include "qlc/gosl.hpp"
#include "qlc/lyap.hpp"
#include "qlc/quat.hpp"
#include "qlc/realrep.hpp"

namespace qlc {

struct PlantConfig {
  int n = 1;
  int m = 1;
  HMatrix B;      /* n x m input map */
  HMatrix C;      /* m x n sliding output map */
  HMatrix D;      /* n x m disturbance map */
  HMatrix K;      /* m x m reaching gain, Phi(K)+Phi(K)^T positive definite */
  BracketSpec bracket;
  BracketConstants constants; /* pinned A, C1, C2 and admissible radii */
  double L_L = 0.0;  /* bracket Lipschitz modulus along the nominal arc */
  double L_r = 0.0;  /* residual-field modulus for the effective rate */
  double w_max = 0.0;
  double alpha_s = 1.0; /* stable design block is -alpha_s I */
  double eta0 = 0.0;
  double epsilon0 = 0.0; /* peaking budget for the reaching transient */
  HVector x0;
  HVector s0;
};

enum class AbortCode {
  initial_state_too_large,
  peaking_budget_exceeded,
  halving_cap_reached,
};

class synthesis_abort : public std::runtime_error {
 public:
  synthesis_abort(AbortCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  AbortCode code() const { return code_; }

 private:
  AbortCode code_;
};

struct SynthesisResult {
  double M0 = 0.0;
  double eps_star = 0.0;
  double rho_eff = 0.0;
  double eta = 0.0;
  double lambda_peak = 0.0;
  double t_star_max = 0.0;
  double kappa = 0.0;   /* asymptotic disturbance gain */
  double c_inf = 0.0;
  double w_lump = 0.0;  /* c_C c_B c_B^+ R_max */
  GoslConstants gosl;
  LmiSolution lmi;
  double R_invariance = 0.0;
  bool invariance_ok = false;  /* R <= eps* */
  bool contraction_ok = false; /* R <= sqrt(2) M0 under identity P */
  int halvings = 0;
  std::vector<std::string> audit; /* one line per loop decision */
};

double eta_gain(double c_prod_rmax, double k_norm, double c_c, double M0, double eta0);

double lambda_peaking(const PlantConfig& cfg, const GoslConstants& gosl, double eta);

double invariance_radius(double M0, const LmiSolution& lmi, double c_inf,
                         double eps_star);

/* runs the synthesis loop: per halving recomputes the growth constants, the
 * effective rate, the feasibility precheck, the peaking budget, the LMI
 * fixed point, and the invariance radius, shrinking M0 until every gate
 * passes or a hard abort fires */
SynthesisResult algorithm1(const PlantConfig& cfg, double beta_init = 0.5,
                           int max_halvings = 40);

/* compensation term: pulls the projected defect back through B^+ and Phi^-1
 * at the grid maximizer used by the plant */
HVector delta_app(const PlantConfig& cfg, const DefectSelection& sel);

/* u = -Delta_app - G^{-1} (eta sgn(s) + K s), G = C B */
HVector control(const PlantConfig& cfg, const DefectSelection& sel, const HVector& s,
                double eta, double boundary_layer = 0.0);

}  // namespace qlc
