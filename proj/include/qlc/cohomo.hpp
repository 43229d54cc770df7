#pragma once

#include <cstdint>
#include <functional>

#include "qlc/bracket.hpp"
#include "qlc/quat.hpp"

namespace qlc {

using CochainEvaluator = std::function<HVector(const std::vector<HVector>&)>;

/* localized k-cochain with values in H^dim */
struct Cochain {
  int degree = 2;
  CochainEvaluator evaluator;
  double epsilon = 0.0;  /* localization radius */
  std::size_t dim = 1;

  HVector operator()(const std::vector<HVector>& args) const {
    return evaluator(args);
  }
};

struct CncBundle {
  double omega_op = 0.0;          /* analytic ceiling 8 C2 eps* */
  double cnc = 0.0;               /* min of the two bounds below */
  double structural_bound = 0.0;  /* 12 C2 */
  double bookkeeping_bound = 0.0; /* 3 omega_op + 6 C2 */
};

CncBundle make_cnc_bundle(double C2, double eps_star);

/* degree-2 -> degree-3 coboundary:
 * (dw)(x0,x1,x2) = L(x0, w(x1,x2)) - L(x1, w(x0,x2)) + L(x2, w(x0,x1))
 *                - w(L(x0,x1), x2) + w(L(x0,x2), x1) - w(L(x1,x2), x0) */
Cochain ce_differential(const BracketSpec& spec, const Cochain& omega);

/* third-slot substitution (pi psi)(x, y, z) := psi(x, y, x + y) */
Cochain pi_cone(const Cochain& psi);

/* w0(x, y) = (1/3) J(x, y, x + y); warns when an argument leaves the ball */
HVector omega0(const BracketSpec& spec, const HVector& x, const HVector& y);
Cochain omega0_cochain(const BracketSpec& spec, double eps_star);

/* R0(x,y,z) = J(x,y,z) - (d w0)(x,y,z) */
HVector residual_r0(const BracketSpec& spec, const HVector& x, const HVector& y,
                    const HVector& z);

/* sup over seeded ball samples of ||w(args)|| / prod ||arg_i||, refined by
 * hill climbing clamped to the ball; lower estimate */
double cochain_norm(const Cochain& omega, std::size_t samples, std::uint64_t seed,
                    int workers = 1);

struct CmcReport {
  bool pass = false;
  double max_residual_rel = 0.0;
  double max_residual_abs = 0.0;
  std::size_t samples = 0;
  double tol = 0.0;
};

/* evaluates d w0 at seeded triplets in the eps*-ball and checks every value
 * lies in Im(B) up to tol (relative) */
CmcReport cmc_check(const BracketSpec& spec, const HMatrix& B, double eps_star,
                    std::size_t samples, std::uint64_t seed, double tol);

}  // namespace qlc
