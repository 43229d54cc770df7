#include "qlc/cohomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "qlc/diag.hpp"
#include "qlc/realrep.hpp"
#include "qlc/rng.hpp"

namespace qlc {

CncBundle make_cnc_bundle(double C2, double eps_star) {
  CncBundle out;
  out.omega_op = 8.0 * C2 * eps_star;
  out.structural_bound = 12.0 * C2;
  out.bookkeeping_bound = 3.0 * out.omega_op + 6.0 * C2;
  out.cnc = std::min(out.structural_bound, out.bookkeeping_bound);
  return out;
}

Cochain ce_differential(const BracketSpec& spec, const Cochain& omega) {
  Cochain out;
  out.degree = omega.degree + 1;
  out.epsilon = omega.epsilon;
  out.dim = omega.dim;
  out.evaluator = [spec, omega](const std::vector<HVector>& args) {
    if (args.size() != 3) throw dimension_error("differential expects 3 arguments");
    const HVector& x0 = args[0];
    const HVector& x1 = args[1];
    const HVector& x2 = args[2];
    auto L = [&](const HVector& a, const HVector& b) {
      return spec.evaluator(a, b, 0.0);
    };
    auto w = [&](const HVector& a, const HVector& b) {
      return omega.evaluator({a, b});
    };
    HVector acc = L(x0, w(x1, x2)) - L(x1, w(x0, x2)) + L(x2, w(x0, x1));
    acc = acc - w(L(x0, x1), x2) + w(L(x0, x2), x1) - w(L(x1, x2), x0);
    return acc;
  };
  return out;
}

Cochain pi_cone(const Cochain& psi) {
  Cochain out;
  out.degree = psi.degree;
  out.epsilon = psi.epsilon;
  out.dim = psi.dim;
  out.evaluator = [psi](const std::vector<HVector>& args) {
    if (args.size() != 3) throw dimension_error("cone substitution expects 3 arguments");
    return psi.evaluator({args[0], args[1], args[0] + args[1]});
  };
  return out;
}

HVector omega0(const BracketSpec& spec, const HVector& x, const HVector& y) {
  if (spec.epsilon0 > 0.0 &&
      (hnorm(x) > spec.epsilon0 || hnorm(y) > spec.epsilon0)) {
    warn("omega0 argument outside the domain ball");
  }
  return jacobiator(spec, x, y, x + y, 0.0) * (1.0 / 3.0);
}

Cochain omega0_cochain(const BracketSpec& spec, double eps_star) {
  Cochain out;
  out.degree = 2;
  out.epsilon = eps_star;
  out.dim = spec.dim;
  out.evaluator = [spec](const std::vector<HVector>& args) {
    if (args.size() != 2) throw dimension_error("2-cochain expects 2 arguments");
    return omega0(spec, args[0], args[1]);
  };
  return out;
}

HVector residual_r0(const BracketSpec& spec, const HVector& x, const HVector& y,
                    const HVector& z) {
  Cochain dw0 = ce_differential(spec, omega0_cochain(spec, spec.epsilon0));
  return jacobiator(spec, x, y, z, 0.0) - dw0({x, y, z});
}

namespace {

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

double* quat_component(Quaternion& q, int c) {
  switch (c) {
    case 0: return &q.w;
    case 1: return &q.x;
    case 2: return &q.y;
    default: return c == 3 ? &q.z : nullptr;
  }
}

}  // namespace

double cochain_norm(const Cochain& omega, std::size_t samples, std::uint64_t seed,
                    int workers) {
  const int k = omega.degree;
  const std::size_t dim = omega.dim;
  const double radius = omega.epsilon;

  auto draw = [&](std::size_t index) {
    CounterRng rng = CounterRng::for_sample(seed, index);
    std::vector<HVector> args;
    args.reserve(k);
    for (int a = 0; a < k; ++a) args.push_back(rng.ball_hvector(dim, radius));
    return args;
  };
  auto ratio = [&](const std::vector<HVector>& args) {
    double denom = 1.0;
    for (const auto& a : args) denom *= hnorm(a);
    if (denom < 1e-30) return 0.0;
    return hnorm(omega.evaluator(args)) / denom;
  };

  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  std::vector<Best> partial(workers);
  auto scan = [&](int w) {
    Best best;
    for (std::size_t i = w; i < samples; i += workers) {
      double v = ratio(draw(i));
      if (v > best.value) {
        best.value = v;
        best.index = i;
      }
    }
    partial[w] = best;
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(scan, w);
    for (auto& th : pool) th.join();
  }
  Best best;
  for (const auto& p : partial) {
    if (p.value > best.value || (p.value == best.value && p.index < best.index)) {
      best = p;
    }
  }

  /* refine inside the ball: perturb one real coordinate at a time, clamp
   * back to the ball, keep improvements */
  std::vector<HVector> args = draw(best.index);
  double value = ratio(args);
  double step = 0.1 * radius;
  for (int pass = 0; pass < 100; ++pass) {
    bool improved = false;
    for (std::size_t a = 0; a < args.size(); ++a) {
      for (std::size_t e = 0; e < args[a].size(); ++e) {
        for (int comp = 0; comp < 4; ++comp) {
          const HVector saved_arg = args[a];
          bool accepted = false;
          for (double delta : {step, -step}) {
            args[a] = saved_arg;
            *quat_component(args[a][e], comp) += delta;
            double n = hnorm(args[a]);
            if (n > radius) args[a] = args[a] * (radius / n);
            double v = ratio(args);
            if (v > value) {
              value = v;
              improved = true;
              accepted = true;
              break;
            }
          }
          if (!accepted) args[a] = saved_arg;
        }
      }
    }
    if (!improved) step *= 0.7;
  }
  return value;
}

CmcReport cmc_check(const BracketSpec& spec, const HMatrix& B, double eps_star,
                    std::size_t samples, std::uint64_t seed, double tol) {
  CmcReport report;
  report.samples = samples;
  report.tol = tol;

  RealMat P = proj_im_b_matrix(B);
  RealMat Q = RealMat::identity(P.rows) - P; /* residual projector */
  Cochain dw0 = ce_differential(spec, omega0_cochain(spec, eps_star));

  double max_rel = 0.0;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterRng rng = CounterRng::for_sample(seed, i);
    std::vector<HVector> args = {rng.ball_hvector(spec.dim, eps_star),
                                 rng.ball_hvector(spec.dim, eps_star),
                                 rng.ball_hvector(spec.dim, eps_star)};
    RealVec v = phi_vec(dw0(args));
    double vn = norm(v);
    if (vn < 1e-300) continue;
    double res = norm(Q * v);
    max_abs = std::max(max_abs, res);
    max_rel = std::max(max_rel, res / vn);
  }
  report.max_residual_rel = max_rel;
  report.max_residual_abs = max_abs;
  report.pass = max_rel <= tol;
  return report;
}

}  // namespace qlc
