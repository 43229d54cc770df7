#pragma once

#include <string>

#include "qlc/realrep.hpp"

namespace qlc {

struct LmiProblem {
  RealMat A_real;      /* stable plant block in the real representation */
  double rho_eff = 0.0;
  double mu_Y = 0.0;
  double mu_k = 1.0;   /* current bound used by theta and the feasibility cap */
  double tol = 1e-10;
  int max_iters = 60;
};

struct LmiSolution {
  RealMat P_star;       /* rescaled so lambda_min(P) >= 1 */
  double beta_star = 0.0;
  double mu_lmi = 0.0;  /* lambda_max(P_star) */
  double mu_y = 0.0;
  double theta = 0.0;
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
  std::string note;
};

double theta(double mu_k, double mu_Y, double rho_eff);

/* bisects beta in (0, 2 alpha_s); per trial solves the Lyapunov equation
 * (A + (beta/2) I)^T P + P (A + (beta/2) I) = -theta I, rescales P by
 * c = max(1, 1/lambda_min(P)), and accepts when c lambda_max(P) <= mu_k.
 * Returns the largest feasible beta found. Throws precondition_error when
 * A is not stable (alpha_s <= 0). Infeasible at every beta reports
 * feasible = false with a note instead of throwing. */
LmiSolution solve_lmi(const LmiProblem& problem);

/* fixed-point iteration on mu_k: starts at mu_0 = op_norm(A_real) + 1,
 * each step solves at a fixed probe beta with theta(mu_k) and updates
 * mu_{k+1} = lambda_max(P). Stops when the relative change drops below
 * problem.tol, then runs one max-beta solve at the converged mu. */
LmiSolution iterate_lmi(const LmiProblem& problem, double beta_init = 0.5);

/* records the fixed-point map mu -> lambda_max(P(mu)) over a grid of probe
 * values; a normal plant yields the constant map */
std::vector<double> monotonicity_check(const RealMat& A_real, double rho_eff,
                                       double mu_Y, const std::vector<double>& grid,
                                       double beta_init = 0.5);

double c_infty(double mu_star, double w_max, double ell, double rho_eff, double mu_Y);

struct MuOpt {
  double value = 0.0;
  bool degenerate = false; /* both disturbance channels vanish */
  bool clamped = false;    /* ell = 0 forced the zero endpoint */
};

MuOpt mu_opt(double mu_star, double w_max, double ell, double rho_eff);

struct KappaParams {
  double mu_star = 1.0;
  double c_prod = 1.0; /* c_C c_B c_B^+ */
  double c_nc = 0.0;
  double eps_star = 0.0;
  double c2 = 0.0;
  double rho_eff = 0.0;
  double mu_Y = 0.0;
};

double kappa_infty(const KappaParams& params);

/* closed form for A = -alpha_s I: P* stays the identity and the margin is
 * beta* = 2 alpha_s - theta; infeasible when that is not positive */
struct NormalClosedForm {
  double beta_star = 0.0;
  bool feasible = false;
};

NormalClosedForm normal_closed_form(double alpha_s, double rho_eff, double mu_k,
                                    double mu_Y, int dim = 4);

}  // namespace qlc
