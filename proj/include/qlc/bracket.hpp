#pragma once

#include <cstdint>
#include <functional>

#include "qlc/quat.hpp"

namespace qlc {

using BracketEvaluator =
    std::function<HVector(const HVector&, const HVector&, double)>;

/* real-bilinear bracket on H^dim, optionally time dependent */
struct BracketSpec {
  BracketEvaluator evaluator;
  bool antisymmetric = false;
  double eps_b = 0.0;     /* test-bracket coupling */
  double epsilon0 = 0.0;  /* domain radius */
  std::size_t dim = 1;
};

struct BracketConstants {
  double A = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double eps_star_generic = 0.0;
  double eps_star_antisym = 0.0;
};

/* L(x, y) = eps_b * (conj(x) y - conj(y) x), componentwise on H^n */
BracketSpec make_test_bracket(double eps_b, double epsilon0, std::size_t dim = 1);
BracketSpec make_zero_bracket(double epsilon0, std::size_t dim = 1);
/* x y - y x componentwise; exact Lie bracket */
BracketSpec make_commutator_bracket(double epsilon0, std::size_t dim = 1);
/* n = 2 bracket acting on the second coordinate only */
BracketSpec make_second_coordinate_bracket(double eps_b, double epsilon0);

HVector eval_bracket(const BracketSpec& spec, const HVector& x, const HVector& y,
                     double t);

/* L(x, L(y,z)) + L(y, L(z,x)) + L(z, L(x,y)) */
HVector jacobiator(const BracketSpec& spec, const HVector& x, const HVector& y,
                   const HVector& z, double t);

struct EstimateOptions {
  std::size_t samples = 50000;
  std::uint64_t seed = 1;
  int workers = 1;          /* 0 = auto */
  int hill_climb_steps = 100;
};

/* sup ||L(x,y)|| / (||x|| ||y||), Monte Carlo on unit spheres plus
 * coordinate-wise hill climbing; lower estimate of the true constant */
double estimate_A(const BracketSpec& spec, std::size_t samples, std::uint64_t seed,
                  int workers = 1);

/* (sup ||J(x,y,z)|| / (||x|| ||y|| ||z||)) / 6 */
double estimate_C2(const BracketSpec& spec, std::size_t samples, std::uint64_t seed,
                   int workers = 1);

/* antisymmetry defect constant; zero without sampling when the flag is set */
double estimate_C1(const BracketSpec& spec, std::size_t samples, std::uint64_t seed,
                   int workers = 1);

/* generic: min{1/(16A), sqrt(1/(16 C1)), 1/(4 C2), eps0}, with the sqrt term
 * +inf at C1 = 0; antisymmetric variant: min{1/(8A), 1/(4 C2), eps0} */
double admissible_radius(double A, double C1, double C2, double eps0,
                         bool antisymmetric);

BracketConstants bracket_constants(double A, double C1, double C2, double eps0);

}  // namespace qlc
