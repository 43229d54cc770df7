#include <atomic>
#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qlc/bracket.hpp"
#include "qlc/cohomo.hpp"
#include "qlc/diag.hpp"
#include "qlc/quat.hpp"
#include "qlc/rng.hpp"

using namespace qlc;

namespace {

const Quaternion Q1{1.0, 0.0, 0.0, 0.0};
const Quaternion QI{0.0, 1.0, 0.0, 0.0};
const Quaternion QJ{0.0, 0.0, 1.0, 0.0};

/* L(x, y) = eps_b * conj(x) y componentwise; deliberately not antisymmetric,
 * so the quadratic correction and its coboundary are nonzero */
BracketSpec half_pairing(double eps_b, std::size_t dim) {
  BracketSpec spec;
  spec.evaluator = [eps_b, dim](const HVector& x, const HVector& y, double) {
    HVector out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = qmul(qconj(x[i]), y[i]) * eps_b;
    return out;
  };
  spec.antisymmetric = false;
  spec.eps_b = eps_b;
  spec.epsilon0 = 0.0;
  spec.dim = dim;
  return spec;
}

Cochain bracket_cochain(const BracketSpec& spec) {
  Cochain w;
  w.degree = 2;
  w.dim = spec.dim;
  w.epsilon = spec.epsilon0;
  w.evaluator = [spec](const std::vector<HVector>& args) {
    return eval_bracket(spec, args[0], args[1], 0.0);
  };
  return w;
}

}  // namespace

TEST_CASE("nonclosure bound bundle") {
  CncBundle b = make_cnc_bundle(0.00665, 0.3125);
  CHECK(b.omega_op == doctest::Approx(0.016625).epsilon(1e-12));
  CHECK(b.structural_bound == doctest::Approx(0.0798).epsilon(1e-12));
  CHECK(b.bookkeeping_bound == doctest::Approx(0.089775).epsilon(1e-12));
  CHECK(b.cnc == b.structural_bound);
}

TEST_CASE("quadratic correction of the half pairing at unit inputs") {
  BracketSpec spec = half_pairing(0.1, 1);
  HVector v = omega0(spec, HVector{Q1}, HVector{QI});
  CHECK(v[0].w == doctest::Approx(0.01 / 3.0).epsilon(1e-13));
  CHECK(v[0].x == doctest::Approx(-0.01 / 3.0).epsilon(1e-13));
  CHECK(std::fabs(v[0].y) <= 1e-18);
  CHECK(std::fabs(v[0].z) <= 1e-18);
}

TEST_CASE("quadratic correction matches the oracle on random inputs") {
  BracketSpec spec = half_pairing(0.1, 2);
  oracle::OBracket ob = oracle::obracket_halfpairing(0.1);
  CounterRng rng(31);
  for (int t = 0; t < 30; ++t) {
    HVector x = rng.gaussian_hvector(2);
    HVector y = rng.gaussian_hvector(2);
    oracle::OVec want = oracle::oomega0(ob, oracle::ovec(x), oracle::ovec(y));
    CHECK(oracle::max_component_diff(want, omega0(spec, x, y)) <= 1e-13);
  }
}

TEST_CASE("coboundary matches the six term oracle") {
  BracketSpec spec = half_pairing(0.1, 2);
  oracle::OBracket ob = oracle::obracket_halfpairing(0.1);
  Cochain dw = ce_differential(spec, omega0_cochain(spec, 0.3125));
  CHECK(dw.degree == 3);
  auto ow = [&ob](const oracle::OVec& a, const oracle::OVec& b) {
    return oracle::oomega0(ob, a, b);
  };
  CounterRng rng(32);
  double max_val = 0.0;
  for (int t = 0; t < 30; ++t) {
    HVector x = rng.gaussian_hvector(2);
    HVector y = rng.gaussian_hvector(2);
    HVector z = rng.gaussian_hvector(2);
    oracle::OVec want = oracle::odifferential(ob, ow, oracle::ovec(x),
                                              oracle::ovec(y), oracle::ovec(z));
    HVector got = dw({x, y, z});
    CHECK(oracle::max_component_diff(want, got) <= 1e-12);
    max_val = std::max(max_val, hnorm(got));
  }
  /* the comparison is vacuous if everything collapses to zero */
  CHECK(max_val > 1e-4);
}

TEST_CASE("coboundary is trilinear") {
  /* unit coupling keeps every intermediate an integer, so the scaling
   * identities hold exactly */
  BracketSpec pairing = make_test_bracket(1.0, 100.0, 1);
  Cochain dw = ce_differential(pairing, bracket_cochain(pairing));
  HVector x0{{1.0, 2.0, 0.0, -1.0}};
  HVector x1{{0.0, 1.0, 1.0, 0.0}};
  HVector x2{{3.0, 0.0, -2.0, 1.0}};
  HVector base = dw({x0, x1, x2});
  CHECK(hnorm(base) > 0.0);
  CHECK(hnorm(dw({x0 * 2.0, x1, x2}) - base * 2.0) == 0.0);
  CHECK(hnorm(dw({x0, x1 * 3.0, x2}) - base * 3.0) == 0.0);
  CHECK(hnorm(dw({x0, x1, x2 * 5.0}) - base * 5.0) == 0.0);
  HVector y0{{0.0, 0.0, 1.0, 1.0}};
  HVector shifted = dw({x0 + y0, x1, x2});
  HVector split = base + dw({y0, x1, x2});
  CHECK(hnorm(shifted - split) == 0.0);
}

TEST_CASE("cone substitution repeats the first two slots") {
  Cochain psi;
  psi.degree = 3;
  psi.dim = 1;
  psi.evaluator = [](const std::vector<HVector>& args) { return args[2]; };
  Cochain pi = pi_cone(psi);
  CHECK(pi.degree == 3);
  HVector x{QI};
  HVector y{QJ};
  HVector za{Q1};
  HVector zb{{5.0, -2.0, 0.0, 7.0}};
  HVector va = pi({x, y, za});
  HVector vb = pi({x, y, zb});
  CHECK(hnorm(va - vb) == 0.0);
  CHECK(hnorm(va - (x + y)) == 0.0);
}

TEST_CASE("quadratic correction vanishes for antisymmetric brackets") {
  BracketSpec spec = make_test_bracket(0.1, 0.5, 2);
  HVector x{(Q1 + QI) * 0.1, Quaternion{}};
  HVector y{QJ * 0.1, Quaternion{}};
  CHECK(hnorm(omega0(spec, x, y)) <= 1e-15);
  CounterRng rng(33);
  for (int t = 0; t < 40; ++t) {
    HVector a = rng.ball_hvector(2, 0.4);
    HVector b = rng.ball_hvector(2, 0.4);
    CHECK(hnorm(omega0(spec, a, b)) <= 1e-14);
  }
}

TEST_CASE("evaluating the correction outside its ball raises a warning") {
  BracketSpec spec = make_test_bracket(0.1, 0.5);
  std::atomic<int> count{0};
  set_warning_handler([&count](const std::string&) { ++count; });
  omega0(spec, HVector{Q1 * 2.0}, HVector{QI * 0.1});
  CHECK(count.load() >= 1);
  int after_inside = count.load();
  omega0(spec, HVector{Q1 * 0.1}, HVector{QI * 0.1});
  CHECK(count.load() == after_inside);
  set_warning_handler([](const std::string&) {});
}

TEST_CASE("closure defect stays within the analytic ceiling") {
  BracketSpec spec = make_test_bracket(0.1, 0.5);
  CncBundle bound = make_cnc_bundle(0.00665, 0.3125);
  double worst = 0.0;
  for (std::size_t t = 0; t < 10000; ++t) {
    CounterRng rng = CounterRng::for_sample(77, t);
    HVector x = rng.ball_hvector(1, 0.3125);
    HVector y = rng.ball_hvector(1, 0.3125);
    HVector z = rng.ball_hvector(1, 0.3125);
    double prod = hnorm(x) * hnorm(y) * hnorm(z);
    double res = hnorm(residual_r0(spec, x, y, z));
    CHECK(res <= bound.cnc * prod * (1.0 + 1e-9) + 1e-16);
    if (prod > 1e-12) worst = std::max(worst, res / prod);
  }
  CHECK(worst <= bound.cnc);
  CHECK(worst > 0.0);
}

TEST_CASE("cochain norm estimate") {
  SUBCASE("zero bracket gives exactly zero") {
    BracketSpec zero = make_zero_bracket(0.5, 2);
    Cochain w0 = omega0_cochain(zero, 0.3125);
    CHECK(cochain_norm(w0, 200, 3) == 0.0);
  }
  SUBCASE("doubling the cochain doubles the estimate") {
    BracketSpec spec = half_pairing(0.1, 1);
    Cochain w = bracket_cochain(spec);
    w.epsilon = 0.3125;
    Cochain w2 = w;
    w2.evaluator = [w](const std::vector<HVector>& args) {
      return w(args) * 2.0;
    };
    double n1 = cochain_norm(w, 300, 4);
    CHECK(n1 > 0.0);
    CHECK(cochain_norm(w2, 300, 4) == 2.0 * n1);
  }
  SUBCASE("correction of the pairing bracket sits far below its ceiling") {
    BracketSpec spec = make_test_bracket(0.1, 0.5);
    Cochain w0 = omega0_cochain(spec, 0.3125);
    double est = cochain_norm(w0, 500, 5);
    CHECK(est >= 0.0);
    CHECK(est <= 0.016625);
  }
}

TEST_CASE("membership check of the coboundary against an input channel") {
  SUBCASE("full channel passes with zero residual") {
    BracketSpec spec = make_test_bracket(0.1, 0.5);
    HMatrix B(1, 1);
    B.at(0, 0) = Q1;
    CmcReport rep = cmc_check(spec, B, 0.3125, 64, 11, 1e-9);
    CHECK(rep.pass);
    CHECK(rep.max_residual_rel == 0.0);
    CHECK(rep.samples == 64);
  }
  SUBCASE("channel that misses the active coordinate fails") {
    BracketSpec spec = make_second_coordinate_bracket(0.1, 0.5);
    HMatrix B(2, 1);
    B.at(0, 0) = Q1;
    CmcReport rep = cmc_check(spec, B, 0.5, 128, 11, 1e-9);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual_rel > 1e-9);
    /* loosening the tolerance past the worst ratio flips the verdict */
    CmcReport loose = cmc_check(spec, B, 0.5, 128, 11, 2.0);
    CHECK(loose.pass);
    CHECK(loose.max_residual_rel == rep.max_residual_rel);
  }
  SUBCASE("identically closed bracket passes any channel") {
    BracketSpec zero = make_zero_bracket(0.5, 2);
    HMatrix B(2, 1);
    B.at(0, 0) = Q1;
    CmcReport rep = cmc_check(zero, B, 0.3125, 32, 11, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.max_residual_rel == 0.0);
  }
}
