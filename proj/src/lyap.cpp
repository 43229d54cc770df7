#include "qlc/lyap.hpp"

#include <algorithm>
#include <cmath>

namespace qlc {

double theta(double mu_k, double mu_Y, double rho_eff) {
  return mu_k * (2.0 * rho_eff + mu_Y) + (rho_eff - mu_Y);
}

namespace {

double stability_margin(const RealMat& A) {
  RealMat symA = (A + transpose(A)) * 0.5;
  SpectralData eig = sym_eig(symA, false);
  double alpha_s = -eig.eigenvalues.back();
  if (!(alpha_s > 0.0)) {
    throw precondition_error("plant block is not uniformly stable");
  }
  return alpha_s;
}

/* M^T P + P M = -theta I via the stacked system
 * (I (x) M^T + M^T (x) I) vec(P) = vec(-theta I), columns stacked */
RealMat solve_lyapunov(const RealMat& M, double theta_val) {
  const std::size_t n = M.rows;
  RealMat K(n * n, n * n);
  RealVec rhs(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = j * n + i;
      for (std::size_t l = 0; l < n; ++l) {
        K.at(r, j * n + l) += M.at(l, i);
        K.at(r, l * n + i) += M.at(l, j);
      }
      if (i == j) rhs[r] = -theta_val;
    }
  }
  RealVec p = solve_dense(K, rhs);
  RealMat P(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) P.at(i, j) = p[j * n + i];
  }
  /* the solution of a symmetric equation; trim solver asymmetry */
  return (P + transpose(P)) * 0.5;
}

struct RescaledP {
  RealMat P;
  double lmax = 0.0;
  bool positive = false;
};

RescaledP rescaled_solution(const RealMat& A, double beta, double theta_val) {
  const std::size_t n = A.rows;
  RealMat M = A + RealMat::identity(n) * (beta * 0.5);
  RealMat P = solve_lyapunov(M, theta_val);
  SpectralData eig = sym_eig(P, false);
  double lmin = eig.eigenvalues.front();
  double lmax = eig.eigenvalues.back();
  RescaledP out;
  if (!(lmin > 0.0)) return out;
  double c = std::max(1.0, 1.0 / lmin);
  out.P = P * c;
  out.lmax = lmax * c;
  out.positive = true;
  return out;
}

}  // namespace

LmiSolution solve_lmi(const LmiProblem& problem) {
  const double alpha_s = stability_margin(problem.A_real);
  const double th = theta(problem.mu_k, problem.mu_Y, problem.rho_eff);
  const std::size_t n = problem.A_real.rows;

  LmiSolution sol;
  sol.mu_y = problem.mu_Y;
  sol.theta = th;

  if (th == 0.0) {
    sol.P_star = RealMat::identity(n);
    sol.beta_star = 2.0 * alpha_s;
    sol.mu_lmi = 1.0;
    sol.feasible = problem.mu_k >= 1.0;
    sol.converged = true;
    sol.iterations = 0;
    if (!sol.feasible) sol.note = "identity certificate exceeds the mu bound";
    return sol;
  }

  double lo = 0.0;
  double hi = 2.0 * alpha_s;
  bool found = false;
  RealMat best_p;
  double best_lmax = 0.0;
  int used = 0;
  for (int it = 0; it < problem.max_iters; ++it) {
    ++used;
    double mid = 0.5 * (lo + hi);
    RescaledP ev = rescaled_solution(problem.A_real, mid, th);
    if (ev.positive && ev.lmax <= problem.mu_k) {
      lo = mid;
      found = true;
      best_p = std::move(ev.P);
      best_lmax = ev.lmax;
    } else {
      hi = mid;
    }
    if (hi - lo <= problem.tol * hi) break;
  }
  sol.iterations = used;
  sol.converged = hi - lo <= problem.tol * hi;
  if (found) {
    sol.feasible = true;
    sol.beta_star = lo;
    sol.P_star = std::move(best_p);
    sol.mu_lmi = best_lmax;
  } else {
    sol.feasible = false;
    sol.beta_star = 0.0;
    sol.P_star = RealMat::identity(n);
    sol.mu_lmi = 0.0;
    sol.note = "no feasible decay rate below the stability margin";
  }
  return sol;
}

LmiSolution iterate_lmi(const LmiProblem& problem, double beta_init) {
  const double alpha_s = stability_margin(problem.A_real);
  if (!(beta_init > 0.0) || beta_init >= 2.0 * alpha_s) {
    throw precondition_error("probe rate outside (0, 2 alpha_s)");
  }

  double mu = op_norm(problem.A_real) + 1.0;
  int updates = 0;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    double th = theta(mu, problem.mu_Y, problem.rho_eff);
    double mu_new;
    if (th == 0.0) {
      mu_new = 1.0;
    } else {
      RescaledP ev = rescaled_solution(problem.A_real, beta_init, th);
      if (!ev.positive) {
        throw precondition_error("probe solve lost positive definiteness");
      }
      mu_new = ev.lmax;
    }
    if (std::fabs(mu_new - mu) / mu < problem.tol) {
      converged = true;
      break;
    }
    mu = mu_new;
    ++updates;
  }

  LmiProblem fin = problem;
  fin.mu_k = mu;
  LmiSolution sol = solve_lmi(fin);
  sol.iterations = updates;
  sol.converged = converged;
  return sol;
}

std::vector<double> monotonicity_check(const RealMat& A_real, double rho_eff,
                                       double mu_Y, const std::vector<double>& grid,
                                       double beta_init) {
  const double alpha_s = stability_margin(A_real);
  if (!(beta_init > 0.0) || beta_init >= 2.0 * alpha_s) {
    throw precondition_error("probe rate outside (0, 2 alpha_s)");
  }
  std::vector<double> out;
  out.reserve(grid.size());
  for (double mu : grid) {
    double th = theta(mu, mu_Y, rho_eff);
    if (th == 0.0) {
      out.push_back(1.0);
      continue;
    }
    RescaledP ev = rescaled_solution(A_real, beta_init, th);
    if (!ev.positive) {
      throw precondition_error("probe solve lost positive definiteness");
    }
    out.push_back(ev.lmax);
  }
  return out;
}

double c_infty(double mu_star, double w_max, double ell, double rho_eff,
               double mu_Y) {
  double term1 = 0.0;
  if (w_max != 0.0) {
    if (!(rho_eff > mu_Y)) {
      throw precondition_error("split parameter must stay below the loss rate");
    }
    term1 = mu_star * mu_star * w_max * w_max / (rho_eff - mu_Y);
  }
  double term2 = 0.0;
  if (ell != 0.0) {
    if (!(mu_Y > 0.0)) {
      throw precondition_error("split parameter must be positive");
    }
    term2 = mu_star * ell * ell / mu_Y;
  }
  return term1 + term2;
}

MuOpt mu_opt(double mu_star, double w_max, double ell, double rho_eff) {
  MuOpt out;
  if (w_max == 0.0 && ell == 0.0) {
    out.value = 0.5 * rho_eff;
    out.degenerate = true;
    return out;
  }
  if (ell == 0.0) {
    out.value = 0.0;
    out.clamped = true;
    return out;
  }
  double s = std::sqrt(mu_star) * ell;
  out.value = rho_eff * s / (mu_star * w_max + s);
  return out;
}

double kappa_infty(const KappaParams& params) {
  double eps2 = params.eps_star * params.eps_star;
  double w_bound = params.c_prod * params.c_nc * eps2;
  double ell_bound = 24.0 * params.c2 * eps2;
  return c_infty(params.mu_star, w_bound, ell_bound, params.rho_eff, params.mu_Y);
}

NormalClosedForm normal_closed_form(double alpha_s, double rho_eff, double mu_k,
                                    double mu_Y, int) {
  NormalClosedForm out;
  out.beta_star = 2.0 * alpha_s - theta(mu_k, mu_Y, rho_eff);
  out.feasible = out.beta_star > 0.0;
  return out;
}

}  // namespace qlc
