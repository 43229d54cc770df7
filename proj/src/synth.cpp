#include "qlc/synth.hpp"

#include <cmath>
#include <sstream>

#include "qlc/cohomo.hpp"

namespace qlc {

double eta_gain(double c_prod_rmax, double k_norm, double c_c, double M0,
                double eta0) {
  return c_prod_rmax + k_norm * c_c * M0 + eta0;
}

namespace {

struct PlantNorms {
  double c_b = 0.0;
  double c_bplus = 0.0;
  double c_c = 0.0;
  double c_g = 0.0; /* op norm of (C B)^{-1} in the real representation */
  double k_norm = 0.0;
  double d_norm = 0.0;
};

PlantNorms plant_norms(const PlantConfig& cfg) {
  PlantNorms out;
  out.c_b = op_norm(phi_mat(cfg.B));
  out.c_bplus = pinv(phi_mat(cfg.B)).c_bplus;
  out.c_c = op_norm(phi_mat(cfg.C));
  out.c_g = op_norm(invert_dense(phi_mat(hmat_mul(cfg.C, cfg.B))));
  out.k_norm = op_norm(phi_mat(cfg.K));
  out.d_norm = op_norm(phi_mat(cfg.D));
  return out;
}

void require_reaching_gain(const PlantConfig& cfg) {
  RealMat Kr = phi_mat(cfg.K);
  SpectralData eig = sym_eig((Kr + transpose(Kr)) * 0.5, false);
  if (!(eig.eigenvalues.front() > 0.0)) {
    throw precondition_error("reaching gain has no positive symmetric part");
  }
}

}  // namespace

double lambda_peaking(const PlantConfig& cfg, const GoslConstants& gosl,
                      double eta) {
  PlantNorms nm = plant_norms(cfg);
  double inner = nm.c_bplus * (gosl.deltabar_max + gosl.r_max) +
                 nm.c_g * (eta + nm.k_norm * gosl.M0);
  return cfg.L_L * gosl.M0 + gosl.deltabar_max + nm.c_b * inner +
         nm.d_norm * cfg.w_max;
}

double invariance_radius(double M0, const LmiSolution& lmi, double c_inf, double) {
  SpectralData eig = sym_eig(lmi.P_star, false);
  double lmin = eig.eigenvalues.front();
  double lmax = eig.eigenvalues.back();
  if (!(lmin > 0.0)) throw precondition_error("certificate is not positive definite");
  double cond = lmax / lmin;
  double r2 = cond * M0 * M0 + c_inf / (lmin * lmi.beta_star);
  return std::sqrt(r2);
}

SynthesisResult algorithm1(const PlantConfig& cfg, double beta_init,
                           int max_halvings) {
  require_reaching_gain(cfg);
  const double eps_star = cfg.constants.eps_star_generic;
  const double C2 = cfg.constants.C2;
  const double cnc = make_cnc_bundle(C2, eps_star).cnc;
  const PlantNorms nm = plant_norms(cfg);
  const double alpha_s = cfg.alpha_s;
  if (!(alpha_s > 0.0)) throw precondition_error("stable block rate must be positive");

  HMatrix A_s = HMatrix::scalar(static_cast<std::size_t>(cfg.n),
                                Quaternion::real(-alpha_s));
  RealMat A_real = phi_mat(A_s);

  double M0 = hnorm(cfg.x0) + cfg.epsilon0;
  if (M0 > eps_star / std::sqrt(2.0)) {
    throw synthesis_abort(AbortCode::initial_state_too_large,
                          "initial state too large");
  }

  SynthesisResult res;
  res.eps_star = eps_star;

  int halvings = 0;
  for (;;) {
    if (halvings > max_halvings) {
      throw synthesis_abort(AbortCode::halving_cap_reached,
                            "halving cap reached without a feasible design");
    }
    auto log = [&](const std::string& what) {
      std::ostringstream os;
      os << "halving " << halvings << " (M0=" << M0 << "): " << what;
      res.audit.push_back(os.str());
    };

    GoslConstants gosl = gosl_constants(C2, cnc, M0, eps_star);
    double rho_eff = gosl.rho_tight + 2.0 * cfg.L_r * M0;
    double mu0 = op_norm(A_real) + 1.0;
    if (!(beta_init + rho_eff * mu0 < 2.0 * alpha_s)) {
      log("initial feasibility check failed");
      M0 *= 0.5;
      ++halvings;
      continue;
    }

    double w_lump = nm.c_c * nm.c_b * nm.c_bplus * gosl.r_max;
    double eta = eta_gain(w_lump, nm.k_norm, nm.c_c, M0, cfg.eta0);
    double lambda = lambda_peaking(cfg, gosl, eta);
    double t_star_max = cfg.eta0 > 0.0 ? hnorm(cfg.s0) / cfg.eta0 : 0.0;
    if (!(t_star_max * lambda < cfg.epsilon0)) {
      throw synthesis_abort(AbortCode::peaking_budget_exceeded,
                            "reduce ||s(0)|| or increase eta0");
    }

    double mu_Y = 0.5 * rho_eff;
    LmiProblem problem;
    problem.A_real = A_real;
    problem.rho_eff = rho_eff;
    problem.mu_Y = mu_Y;
    LmiSolution lmi = iterate_lmi(problem, beta_init);
    if (!lmi.feasible) {
      log("certificate search infeasible");
      M0 *= 0.5;
      ++halvings;
      continue;
    }

    KappaParams kp;
    kp.mu_star = lmi.mu_lmi;
    kp.c_prod = nm.c_c * nm.c_b * nm.c_bplus;
    kp.c_nc = cnc;
    kp.eps_star = eps_star;
    kp.c2 = C2;
    kp.rho_eff = rho_eff;
    kp.mu_Y = mu_Y;
    double kappa = kappa_infty(kp);
    double c_inf = c_infty(lmi.mu_lmi, w_lump, gosl.ell_tight, rho_eff, mu_Y);

    SpectralData peig = sym_eig(lmi.P_star, false);
    double lmin_p = peig.eigenvalues.front();
    if (!(lmi.beta_star * lmin_p > kappa)) {
      log("decay margin below the asymptotic gain");
      M0 *= 0.5;
      ++halvings;
      continue;
    }
    if (std::sqrt(2.0) * M0 > eps_star) {
      log("doubled radius leaves the admissible ball");
      M0 *= 0.5;
      ++halvings;
      continue;
    }

    double R = invariance_radius(M0, lmi, c_inf, eps_star);
    log("accepted");

    res.M0 = M0;
    res.rho_eff = rho_eff;
    res.eta = eta;
    res.lambda_peak = lambda;
    res.t_star_max = t_star_max;
    res.kappa = kappa;
    res.c_inf = c_inf;
    res.w_lump = w_lump;
    res.gosl = gosl;
    res.lmi = lmi;
    res.R_invariance = R;
    res.invariance_ok = R <= eps_star;
    res.contraction_ok = R <= std::sqrt(2.0) * M0;
    res.halvings = halvings;
    return res;
  }
}

HVector delta_app(const PlantConfig& cfg, const DefectSelection& sel) {
  Cochain dw0 = ce_differential(
      cfg.bracket, omega0_cochain(cfg.bracket, cfg.constants.eps_star_generic));
  HVector v = dw0({sel.x, sel.x + sel.xi1, sel.x + sel.xi2});
  RealMat Breal = phi_mat(cfg.B);
  RealMat proj = proj_im_b_matrix(cfg.B);
  PinvResult pb = pinv(Breal);
  return phi_inv_vec(pb.pinv * (proj * phi_vec(v)));
}

HVector control(const PlantConfig& cfg, const DefectSelection& sel, const HVector& s,
                double eta, double boundary_layer) {
  HVector comp = delta_app(cfg, sel);

  HVector sgn;
  if (boundary_layer > 0.0) {
    double n = hnorm(s);
    sgn = s * (1.0 / std::max(n, boundary_layer));
  } else {
    sgn = sgn_h(s);
  }

  HVector v = sgn * eta + hmat_vec(cfg.K, s);
  RealMat Ginv = invert_dense(phi_mat(hmat_mul(cfg.C, cfg.B)));
  HVector correction = phi_inv_vec(Ginv * phi_vec(v));
  HVector u(comp.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = -comp[i] - correction[i];
  }
  return u;
}

}  // namespace qlc
