#pragma once

#include <cstdint>
#include <optional>

#include "qlc/bracket.hpp"
#include "qlc/quat.hpp"

namespace qlc {

/* sampling scheme for the selection ball: radial shells x seeded unit
 * directions per slot (product grid) plus joint random pairs */
struct GridConfig {
  int shells = 3;
  int directions = 64;
  int random_pairs = 256;
  std::uint64_t seed = 9001;
};

GridConfig certification_grid();
GridConfig online_grid();

struct DefectSelection {
  HVector x;              /* state the search ran at */
  HVector xi1, xi2;
  HVector value;          /* projected Jacobiator at the maximizer */
  double magnitude = 0.0; /* ||value|| */
};

struct GoslConstants {
  double M0 = 0.0;
  double eps_star = 0.0;
  double deltabar_max = 0.0; /* 6 C2 M (M + eps*)^2 */
  double rho_delta = 0.0;    /* 6 C2 (M + eps*)(3M + eps*) */
  double rho_tight = 0.0;    /* 2 rho_delta */
  double ell_tight = 0.0;    /* 4 deltabar_max */
  double r_max = 0.0;        /* C_nc M (M + eps*)^2 */
  double c_nc = 0.0;
  /* small-domain approximations, present when 10 M <= eps_star */
  std::optional<double> rho_tight_small;
  std::optional<double> ell_tight_small;
};

/* maximizes ||proj_Im(B) J(x, x+xi1, x+xi2, t)|| over the sampled selection
 * ball; deterministic for a fixed config (first-found tie break in grid
 * order, random pairs appended after the product grid) */
DefectSelection defect(const BracketSpec& spec, const HMatrix& B, const HVector& x,
                       double t, double eps_star, const GridConfig& grid);

GoslConstants gosl_constants(double C2, double c_nc, double M0, double eps_star);

struct GoslReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double max_slack = 0.0; /* max of lhs - rhs over pairs; violation when > 1e-10 */
  double max_defect_ratio = 0.0;
};

/* samples (x, z) in the M0-ball and checks
 * <delta(x)-delta(z), x-z> <= rho_tight ||x-z||^2 + ell_tight ||x-z|| + 1e-10 */
GoslReport verify_gosl(const BracketSpec& spec, const HMatrix& B,
                       const GoslConstants& constants, std::size_t pairs,
                       std::uint64_t seed, int workers = 1,
                       const GridConfig& grid = certification_grid());

}  // namespace qlc
