#include "qlc/gosl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "qlc/diag.hpp"
#include "qlc/realrep.hpp"
#include "qlc/rng.hpp"

namespace qlc {

GridConfig certification_grid() { return {3, 64, 256, 9001}; }

GridConfig online_grid() { return {2, 8, 0, 9001}; }

/* The bracket is bilinear, so with xi1 = r1 d1 and xi2 = r2 d2 the projected
 * Jacobiator splits into four precomputable pieces:
 *   J(x, x + r1 d1, x + r2 d2) = J(x,x,x) + r2 J(x,x,d2) + r1 J(x,d1,x)
 *                              + r1 r2 J(x,d1,d2).
 * The grid scan then reduces to length-4n vector combines. */
DefectSelection defect(const BracketSpec& spec, const HMatrix& B, const HVector& x,
                       double t, double eps_star, const GridConfig& grid) {
  const std::size_t dim = spec.dim;
  if (x.size() != dim) throw dimension_error("state size does not match bracket");
  const int S = grid.shells;
  const int D = grid.directions;
  const bool has_grid = S > 0 && D > 0;
  if (!has_grid && grid.random_pairs <= 0) {
    throw config_error("defect search grid is empty");
  }

  RealMat P = proj_im_b_matrix(B);
  auto L = [&](const HVector& a, const HVector& b) {
    return spec.evaluator(a, b, t);
  };
  auto projected = [&](const HVector& h) { return P * phi_vec(h); };

  double best_nsq = -1.0;
  HVector best_xi1, best_xi2;

  if (has_grid) {
    std::vector<HVector> dirs(D);
    for (int i = 0; i < D; ++i) {
      dirs[i] = CounterRng::for_sample(grid.seed, i).unit_hvector(dim);
    }

    const HVector Lxx = L(x, x);
    std::vector<HVector> Lxd(D), Ldx(D);
    for (int i = 0; i < D; ++i) {
      Lxd[i] = L(x, dirs[i]);
      Ldx[i] = L(dirs[i], x);
    }

    const HVector LxLxx = L(x, Lxx);
    const RealVec pJ0 = projected(LxLxx + LxLxx + LxLxx);

    std::vector<RealVec> pA(D), pB(D);
    for (int j = 0; j < D; ++j) {
      pA[j] = projected(L(x, Lxd[j]) + L(x, Ldx[j]) + L(dirs[j], Lxx));
    }
    for (int i = 0; i < D; ++i) {
      pB[i] = projected(L(x, Ldx[i]) + L(dirs[i], Lxx) + L(x, Lxd[i]));
    }
    std::vector<RealVec> pC(static_cast<std::size_t>(D) * D);
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) {
        pC[static_cast<std::size_t>(i) * D + j] = projected(
            L(x, L(dirs[i], dirs[j])) + L(dirs[i], Ldx[j]) + L(dirs[j], Lxd[i]));
      }
    }

    const std::size_t len = pJ0.size();
    for (int s1 = 1; s1 <= S; ++s1) {
      const double r1 = eps_star * s1 / S;
      for (int i = 0; i < D; ++i) {
        const RealVec& bi = pB[i];
        for (int s2 = 1; s2 <= S; ++s2) {
          const double r2 = eps_star * s2 / S;
          const double r12 = r1 * r2;
          for (int j = 0; j < D; ++j) {
            const RealVec& aj = pA[j];
            const RealVec& cij = pC[static_cast<std::size_t>(i) * D + j];
            double nsq = 0.0;
            for (std::size_t l = 0; l < len; ++l) {
              double v = pJ0[l] + r2 * aj[l] + r1 * bi[l] + r12 * cij[l];
              nsq += v * v;
            }
            if (nsq > best_nsq) {
              best_nsq = nsq;
              best_xi1 = dirs[i] * r1;
              best_xi2 = dirs[j] * r2;
            }
          }
        }
      }
    }
  }

  for (int r = 0; r < grid.random_pairs; ++r) {
    CounterRng rng = CounterRng::for_sample(grid.seed, static_cast<std::uint64_t>(D) + r);
    HVector xi1 = rng.ball_hvector(dim, eps_star);
    HVector xi2 = rng.ball_hvector(dim, eps_star);
    RealVec v = projected(jacobiator(spec, x, x + xi1, x + xi2, t));
    double nsq = 0.0;
    for (double e : v.entries) nsq += e * e;
    if (nsq > best_nsq) {
      best_nsq = nsq;
      best_xi1 = xi1;
      best_xi2 = xi2;
    }
  }

  DefectSelection sel;
  sel.x = x;
  sel.xi1 = best_xi1;
  sel.xi2 = best_xi2;
  RealVec exact = projected(jacobiator(spec, x, x + best_xi1, x + best_xi2, t));
  sel.value = phi_inv_vec(exact);
  sel.magnitude = norm(exact);
  return sel;
}

GoslConstants gosl_constants(double C2, double c_nc, double M0, double eps_star) {
  GoslConstants g;
  g.M0 = M0;
  g.eps_star = eps_star;
  g.c_nc = c_nc;
  const double sum = M0 + eps_star;
  g.deltabar_max = 6.0 * C2 * M0 * sum * sum;
  g.rho_delta = 6.0 * C2 * sum * (3.0 * M0 + eps_star);
  g.rho_tight = 2.0 * g.rho_delta;
  g.ell_tight = 4.0 * g.deltabar_max;
  g.r_max = c_nc * M0 * sum * sum;
  if (M0 <= eps_star / 10.0) {
    g.rho_tight_small = 12.0 * C2 * eps_star * eps_star;
    g.ell_tight_small = 24.0 * C2 * M0 * eps_star * eps_star;
  }
  return g;
}

GoslReport verify_gosl(const BracketSpec& spec, const HMatrix& B,
                       const GoslConstants& constants, std::size_t pairs,
                       std::uint64_t seed, int workers, const GridConfig& grid) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(workers), std::max<std::size_t>(pairs, 1)));

  const double M0 = constants.M0;
  const double eps_star = constants.eps_star;
  /* per-state magnitude ceiling: 6 C2 (M0 + eps*)^2 ||x|| */
  const double mag_slope = M0 > 0.0 ? constants.deltabar_max / M0 : 0.0;

  struct Partial {
    std::size_t violations = 0;
    double max_slack = -std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
  };
  std::vector<Partial> partial(workers);

  auto run = [&](int w) {
    Partial acc;
    for (std::size_t p = w; p < pairs; p += static_cast<std::size_t>(workers)) {
      CounterRng rng = CounterRng::for_sample(seed, p);
      HVector xs = rng.ball_hvector(spec.dim, M0);
      HVector zs = rng.ball_hvector(spec.dim, M0);
      HVector dx = defect(spec, B, xs, 0.0, eps_star, grid).value;
      HVector dz = defect(spec, B, zs, 0.0, eps_star, grid).value;

      HVector diff = xs - zs;
      double dn = hnorm(diff);
      double lhs = inner_re(dx - dz, diff);
      double rhs = constants.rho_tight * dn * dn + constants.ell_tight * dn;
      double slack = lhs - rhs;
      acc.max_slack = std::max(acc.max_slack, slack);
      if (slack > 1e-10) ++acc.violations;

      const HVector* states[2] = {&xs, &zs};
      const HVector* values[2] = {&dx, &dz};
      for (int q = 0; q < 2; ++q) {
        double bound = mag_slope * hnorm(*states[q]);
        double mag = hnorm(*values[q]);
        if (bound > 0.0) acc.max_ratio = std::max(acc.max_ratio, mag / bound);
        if (mag > bound + 1e-12) ++acc.violations;
      }
    }
    partial[w] = acc;
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }

  GoslReport report;
  report.pairs = pairs;
  double max_slack = -std::numeric_limits<double>::infinity();
  for (const auto& p : partial) {
    report.violations += p.violations;
    max_slack = std::max(max_slack, p.max_slack);
    report.max_defect_ratio = std::max(report.max_defect_ratio, p.max_ratio);
  }
  report.max_slack = pairs == 0 ? 0.0 : max_slack;
  return report;
}

}  // namespace qlc
