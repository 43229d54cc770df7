#include "qlc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "qlc/cohomo.hpp"
#include "qlc/diag.hpp"
#include "qlc/rng.hpp"

namespace qlc {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw config_error(where + ": " + what);
}

void check_keys(const ordered_json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, "unknown key \"" + it.key() + "\"");
  }
}

const ordered_json& get_field(const ordered_json& obj, const char* key,
                              const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double get_num(const ordered_json& obj, const char* key, const std::string& where) {
  const ordered_json& v = get_field(obj, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

double get_num_or(const ordered_json& obj, const char* key, double fallback,
                  const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(where + "." + key, "expected a number");
  return it->get<double>();
}

long long get_int(const ordered_json& obj, const char* key,
                  const std::string& where) {
  const ordered_json& v = get_field(obj, key, where);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<long long>();
}

long long get_int_or(const ordered_json& obj, const char* key, long long fallback,
                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(where + "." + key, "expected an integer");
  return it->get<long long>();
}

bool get_bool_or(const ordered_json& obj, const char* key, bool fallback,
                 const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(where + "." + key, "expected a boolean");
  return it->get<bool>();
}

std::string get_string(const ordered_json& obj, const char* key,
                       const std::string& where) {
  const ordered_json& v = get_field(obj, key, where);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

Quaternion parse_quat(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) fail(where, "expected [w, x, y, z]");
  for (const auto& c : j) {
    if (!c.is_number()) fail(where, "expected [w, x, y, z]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

HVector parse_hvector(const ordered_json& j, std::size_t n,
                      const std::string& where) {
  if (!j.is_array() || j.size() != n) {
    fail(where, "expected " + std::to_string(n) + " quaternion entries");
  }
  HVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = parse_quat(j[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

HMatrix parse_hmatrix(const ordered_json& j, std::size_t rows, std::size_t cols,
                      const std::string& where) {
  if (!j.is_array() || j.size() != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows");
  }
  HMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != cols) {
      fail(rw, "expected " + std::to_string(cols) + " columns");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out.at(i, c) = parse_quat(row[c], rw + "[" + std::to_string(c) + "]");
    }
  }
  return out;
}

ordered_json quat_json(const Quaternion& q) {
  return ordered_json::array({q.w, q.x, q.y, q.z});
}

ordered_json hvector_json(const HVector& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& q : v.entries) arr.push_back(quat_json(q));
  return arr;
}

ordered_json realmat_json(const RealMat& M) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < M.rows; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < M.cols; ++j) row.push_back(M.at(i, j));
    arr.push_back(row);
  }
  return arr;
}

RealMat parse_realmat(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a matrix");
  std::size_t rows = j.size();
  if (!j[0].is_array()) fail(where, "expected nested rows");
  std::size_t cols = j[0].size();
  RealMat out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) fail(where, "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) fail(where, "expected numeric entries");
      out.at(i, c) = j[i][c].get<double>();
    }
  }
  return out;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw config_error(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  check_keys(doc, "$", {"plant", "bracket", "constants", "estimation",
                        "defect_grid", "lmi", "checks", "sim", "expected"});

  LoadedConfig out;

  const ordered_json& br = get_field(doc, "bracket", "$");
  check_keys(br, "bracket", {"type", "eps_b", "epsilon0", "antisymmetric"});
  std::string btype = get_string(br, "type", "bracket");
  double eps_b = get_num_or(br, "eps_b", 0.0, "bracket");
  double br_eps0 = get_num(br, "epsilon0", "bracket");

  const ordered_json& pl = get_field(doc, "plant", "$");
  check_keys(pl, "plant",
             {"n", "m", "B", "C", "D", "K", "alpha_s", "L_L", "L_r", "w_max",
              "eta0", "epsilon0", "x0", "s0"});
  long long n_ll = get_int(pl, "n", "plant");
  long long m_ll = get_int(pl, "m", "plant");
  if (n_ll < 1 || m_ll < 1) fail("plant", "n and m must be at least 1");
  std::size_t n = static_cast<std::size_t>(n_ll);
  std::size_t m = static_cast<std::size_t>(m_ll);

  PlantConfig& plant = out.plant;
  plant.n = static_cast<int>(n);
  plant.m = static_cast<int>(m);
  plant.B = parse_hmatrix(get_field(pl, "B", "plant"), n, m, "plant.B");
  plant.C = parse_hmatrix(get_field(pl, "C", "plant"), m, n, "plant.C");
  plant.D = parse_hmatrix(get_field(pl, "D", "plant"), n, m, "plant.D");
  plant.K = parse_hmatrix(get_field(pl, "K", "plant"), m, m, "plant.K");
  plant.alpha_s = get_num(pl, "alpha_s", "plant");
  plant.L_L = get_num_or(pl, "L_L", 0.0, "plant");
  plant.L_r = get_num_or(pl, "L_r", 0.0, "plant");
  plant.w_max = get_num_or(pl, "w_max", 0.0, "plant");
  plant.eta0 = get_num(pl, "eta0", "plant");
  plant.epsilon0 = get_num(pl, "epsilon0", "plant");
  plant.x0 = parse_hvector(get_field(pl, "x0", "plant"), n, "plant.x0");
  if (pl.contains("s0")) {
    plant.s0 = parse_hvector(pl["s0"], m, "plant.s0");
  } else {
    plant.s0 = HVector(m);
  }

  if (btype == "test") {
    plant.bracket = make_test_bracket(eps_b, br_eps0, n);
  } else if (btype == "zero") {
    plant.bracket = make_zero_bracket(br_eps0, n);
  } else if (btype == "commutator") {
    plant.bracket = make_commutator_bracket(br_eps0, n);
  } else if (btype == "second_coordinate") {
    if (n != 2) fail("bracket", "second_coordinate bracket needs n = 2");
    plant.bracket = make_second_coordinate_bracket(eps_b, br_eps0);
  } else {
    fail("bracket.type", "unknown bracket \"" + btype + "\"");
  }
  plant.bracket.antisymmetric =
      get_bool_or(br, "antisymmetric", plant.bracket.antisymmetric, "bracket");

  const ordered_json& cn = get_field(doc, "constants", "$");
  check_keys(cn, "constants", {"A", "C1", "C2"});
  plant.constants =
      bracket_constants(get_num(cn, "A", "constants"), get_num(cn, "C1", "constants"),
                        get_num(cn, "C2", "constants"), br_eps0);

  if (doc.contains("estimation")) {
    const ordered_json& es = doc["estimation"];
    check_keys(es, "estimation", {"samples", "seed"});
    out.estimate_samples = static_cast<std::size_t>(
        get_int_or(es, "samples", 50000, "estimation"));
    out.seed = static_cast<std::uint64_t>(get_int_or(es, "seed", 1, "estimation"));
  }

  out.defect_grid = certification_grid();
  if (doc.contains("defect_grid")) {
    const ordered_json& dg = doc["defect_grid"];
    check_keys(dg, "defect_grid", {"shells", "directions", "random_pairs", "seed"});
    out.defect_grid.shells =
        static_cast<int>(get_int_or(dg, "shells", 3, "defect_grid"));
    out.defect_grid.directions =
        static_cast<int>(get_int_or(dg, "directions", 64, "defect_grid"));
    out.defect_grid.random_pairs =
        static_cast<int>(get_int_or(dg, "random_pairs", 256, "defect_grid"));
    out.defect_grid.seed =
        static_cast<std::uint64_t>(get_int_or(dg, "seed", 9001, "defect_grid"));
  }

  if (doc.contains("lmi")) {
    const ordered_json& lm = doc["lmi"];
    check_keys(lm, "lmi", {"beta_init", "max_halvings"});
    out.beta_init = get_num_or(lm, "beta_init", 0.5, "lmi");
    out.max_halvings =
        static_cast<int>(get_int_or(lm, "max_halvings", 40, "lmi"));
  }

  if (doc.contains("checks")) {
    const ordered_json& ck = doc["checks"];
    check_keys(ck, "checks", {"cmc_samples", "cmc_tol", "gosl_pairs"});
    out.cmc_samples =
        static_cast<std::size_t>(get_int_or(ck, "cmc_samples", 512, "checks"));
    out.cmc_tol = get_num_or(ck, "cmc_tol", 1e-9, "checks");
    out.gosl_pairs =
        static_cast<std::size_t>(get_int_or(ck, "gosl_pairs", 10000, "checks"));
  }

  if (doc.contains("sim")) {
    const ordered_json& sm = doc["sim"];
    check_keys(sm, "sim",
               {"dt", "t_end", "boundary_layer", "seed", "online_shells",
                "online_directions", "online_random_pairs", "divergence_factor"});
    out.sim.dt = get_num_or(sm, "dt", 1e-3, "sim");
    out.sim.t_end = get_num_or(sm, "t_end", 10.0, "sim");
    out.sim.boundary_layer = get_num_or(sm, "boundary_layer", 1e-4, "sim");
    out.sim.seed = static_cast<std::uint64_t>(get_int_or(sm, "seed", 7, "sim"));
    out.sim.defect_grid.shells =
        static_cast<int>(get_int_or(sm, "online_shells", 2, "sim"));
    out.sim.defect_grid.directions =
        static_cast<int>(get_int_or(sm, "online_directions", 8, "sim"));
    out.sim.defect_grid.random_pairs =
        static_cast<int>(get_int_or(sm, "online_random_pairs", 0, "sim"));
    out.sim.defect_grid.seed = out.defect_grid.seed;
    out.sim.divergence_factor = get_num_or(sm, "divergence_factor", 10.0, "sim");
  }

  if (doc.contains("expected")) {
    const ordered_json& ex = doc["expected"];
    if (!ex.is_object()) fail("expected", "expected an object");
    for (auto it = ex.begin(); it != ex.end(); ++it) {
      const std::string where = "expected." + it.key();
      check_keys(*it, where, {"value", "tolerance", "relative"});
      Expected e;
      e.value = get_num(*it, "value", where);
      e.tolerance = get_num(*it, "tolerance", where);
      e.relative = get_bool_or(*it, "relative", false, where);
      out.expected[it.key()] = e;
    }
  }

  /* structural requirements used by every command */
  if (!(plant.alpha_s > 0.0)) fail("plant.alpha_s", "must be positive");
  if (!(plant.eta0 > 0.0)) fail("plant.eta0", "must be positive");
  try {
    invert_dense(phi_mat(hmat_mul(plant.C, plant.B)));
  } catch (const singularity_error&) {
    fail("plant", "C*B is not invertible");
  }
  RealMat Kr = phi_mat(plant.K);
  SpectralData keig = sym_eig((Kr + transpose(Kr)) * 0.5, false);
  if (!(keig.eigenvalues.front() > 0.0)) {
    fail("plant.K", "symmetric part must be positive definite");
  }
  return out;
}

Report::Report(std::string title) {
  doc_["title"] = std::move(title);
  doc_["rows"] = ordered_json::array();
}

void Report::put(const std::string& key, double value, const std::string& formula) {
  if (formula.empty()) throw std::logic_error("report row without a formula: " + key);
  doc_["rows"].push_back({{"name", key}, {"value", value}, {"formula", formula}});
}

void Report::put_int(const std::string& key, long long value,
                     const std::string& formula) {
  if (formula.empty()) throw std::logic_error("report row without a formula: " + key);
  doc_["rows"].push_back({{"name", key}, {"value", value}, {"formula", formula}});
}

void Report::put_bool(const std::string& key, bool value,
                      const std::string& formula) {
  if (formula.empty()) throw std::logic_error("report row without a formula: " + key);
  doc_["rows"].push_back({{"name", key}, {"value", value}, {"formula", formula}});
  if (!value) ++failures_;
}

void Report::put_text(const std::string& key, const std::string& value) {
  doc_["rows"].push_back({{"name", key}, {"value", value}});
}

bool Report::put_checked(const std::string& key, double value,
                         const std::string& formula, const Expected& expected) {
  if (formula.empty()) throw std::logic_error("report row without a formula: " + key);
  double tol = expected.relative ? expected.tolerance * std::fabs(expected.value)
                                 : expected.tolerance;
  bool pass = std::fabs(value - expected.value) <= tol;
  doc_["rows"].push_back({{"name", key},
                          {"value", value},
                          {"formula", formula},
                          {"expected", expected.value},
                          {"tolerance", expected.tolerance},
                          {"relative", expected.relative},
                          {"pass", pass}});
  if (!pass) ++failures_;
  return pass;
}

std::string Report::render_text() const {
  std::ostringstream os;
  os << doc_["title"].get<std::string>() << "\n";
  for (const auto& row : doc_["rows"]) {
    os << "  " << row["name"].get<std::string>() << " = ";
    const auto& v = row["value"];
    if (v.is_number_float()) {
      os << format_value(v.get<double>());
    } else if (v.is_boolean()) {
      os << (v.get<bool>() ? "true" : "false");
    } else if (v.is_string()) {
      os << v.get<std::string>();
    } else {
      os << v.dump();
    }
    if (row.contains("formula")) {
      os << "   (" << row["formula"].get<std::string>() << ")";
    }
    if (row.contains("expected")) {
      os << "   expected " << format_value(row["expected"].get<double>()) << " tol "
         << format_value(row["tolerance"].get<double>())
         << (row["relative"].get<bool>() ? " rel" : " abs") << " "
         << (row["pass"].get<bool>() ? "PASS" : "FAIL");
    }
    os << "\n";
  }
  return os.str();
}

void Report::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open output file: " + path);
  out << doc_.dump(2) << "\n";
}

ordered_json synthesis_to_json(const PlantConfig& cfg, const SynthesisResult& r) {
  ordered_json doc;
  doc["n"] = cfg.n;
  doc["m"] = cfg.m;
  doc["M0"] = r.M0;
  doc["eps_star"] = r.eps_star;
  doc["rho_eff"] = r.rho_eff;
  doc["eta"] = r.eta;
  doc["lambda_peak"] = r.lambda_peak;
  doc["t_star_max"] = r.t_star_max;
  doc["kappa"] = r.kappa;
  doc["c_inf"] = r.c_inf;
  doc["w_lump"] = r.w_lump;
  doc["gosl"] = {{"M0", r.gosl.M0},
                 {"eps_star", r.gosl.eps_star},
                 {"deltabar_max", r.gosl.deltabar_max},
                 {"rho_delta", r.gosl.rho_delta},
                 {"rho_tight", r.gosl.rho_tight},
                 {"ell_tight", r.gosl.ell_tight},
                 {"r_max", r.gosl.r_max},
                 {"c_nc", r.gosl.c_nc}};
  doc["lmi"] = {{"P_star", realmat_json(r.lmi.P_star)},
                {"beta_star", r.lmi.beta_star},
                {"mu_lmi", r.lmi.mu_lmi},
                {"mu_y", r.lmi.mu_y},
                {"theta", r.lmi.theta},
                {"iterations", r.lmi.iterations},
                {"converged", r.lmi.converged},
                {"feasible", r.lmi.feasible},
                {"note", r.lmi.note}};
  doc["R_invariance"] = r.R_invariance;
  doc["invariance_ok"] = r.invariance_ok;
  doc["contraction_ok"] = r.contraction_ok;
  doc["halvings"] = r.halvings;
  doc["audit"] = r.audit;
  return doc;
}

SynthesisResult synthesis_from_json(const ordered_json& doc,
                                    const PlantConfig& cfg) {
  check_keys(doc, "synthesis",
             {"n", "m", "M0", "eps_star", "rho_eff", "eta", "lambda_peak",
              "t_star_max", "kappa", "c_inf", "w_lump", "gosl", "lmi",
              "R_invariance", "invariance_ok", "contraction_ok", "halvings",
              "audit"});
  if (get_int(doc, "n", "synthesis") != cfg.n ||
      get_int(doc, "m", "synthesis") != cfg.m) {
    fail("synthesis", "plant dimensions do not match the config");
  }
  SynthesisResult r;
  r.M0 = get_num(doc, "M0", "synthesis");
  r.eps_star = get_num(doc, "eps_star", "synthesis");
  r.rho_eff = get_num(doc, "rho_eff", "synthesis");
  r.eta = get_num(doc, "eta", "synthesis");
  r.lambda_peak = get_num(doc, "lambda_peak", "synthesis");
  r.t_star_max = get_num(doc, "t_star_max", "synthesis");
  r.kappa = get_num(doc, "kappa", "synthesis");
  r.c_inf = get_num(doc, "c_inf", "synthesis");
  r.w_lump = get_num(doc, "w_lump", "synthesis");
  const ordered_json& g = get_field(doc, "gosl", "synthesis");
  check_keys(g, "synthesis.gosl",
             {"M0", "eps_star", "deltabar_max", "rho_delta", "rho_tight",
              "ell_tight", "r_max", "c_nc"});
  r.gosl.M0 = get_num(g, "M0", "synthesis.gosl");
  r.gosl.eps_star = get_num(g, "eps_star", "synthesis.gosl");
  r.gosl.deltabar_max = get_num(g, "deltabar_max", "synthesis.gosl");
  r.gosl.rho_delta = get_num(g, "rho_delta", "synthesis.gosl");
  r.gosl.rho_tight = get_num(g, "rho_tight", "synthesis.gosl");
  r.gosl.ell_tight = get_num(g, "ell_tight", "synthesis.gosl");
  r.gosl.r_max = get_num(g, "r_max", "synthesis.gosl");
  r.gosl.c_nc = get_num(g, "c_nc", "synthesis.gosl");
  const ordered_json& l = get_field(doc, "lmi", "synthesis");
  check_keys(l, "synthesis.lmi",
             {"P_star", "beta_star", "mu_lmi", "mu_y", "theta", "iterations",
              "converged", "feasible", "note"});
  r.lmi.P_star = parse_realmat(get_field(l, "P_star", "synthesis.lmi"),
                               "synthesis.lmi.P_star");
  if (r.lmi.P_star.rows != static_cast<std::size_t>(4 * cfg.n) ||
      r.lmi.P_star.cols != r.lmi.P_star.rows) {
    fail("synthesis.lmi.P_star", "certificate size does not match the plant");
  }
  r.lmi.beta_star = get_num(l, "beta_star", "synthesis.lmi");
  r.lmi.mu_lmi = get_num(l, "mu_lmi", "synthesis.lmi");
  r.lmi.mu_y = get_num(l, "mu_y", "synthesis.lmi");
  r.lmi.theta = get_num(l, "theta", "synthesis.lmi");
  r.lmi.iterations = static_cast<int>(get_int(l, "iterations", "synthesis.lmi"));
  r.lmi.converged = get_bool_or(l, "converged", false, "synthesis.lmi");
  r.lmi.feasible = get_bool_or(l, "feasible", false, "synthesis.lmi");
  r.lmi.note = get_string(l, "note", "synthesis.lmi");
  r.R_invariance = get_num(doc, "R_invariance", "synthesis");
  r.invariance_ok = get_bool_or(doc, "invariance_ok", false, "synthesis");
  r.contraction_ok = get_bool_or(doc, "contraction_ok", false, "synthesis");
  r.halvings = static_cast<int>(get_int(doc, "halvings", "synthesis"));
  const ordered_json& audit = get_field(doc, "audit", "synthesis");
  if (!audit.is_array()) fail("synthesis.audit", "expected an array");
  for (const auto& line : audit) r.audit.push_back(line.get<std::string>());
  return r;
}

namespace {

struct DerivedConstants {
  double M0 = 0.0;
  CncBundle cnc;
  GoslConstants gosl;
  double rho_eff = 0.0;
  double c_bplus = 0.0;
};

DerivedConstants derive_constants(const LoadedConfig& cfg) {
  DerivedConstants d;
  const PlantConfig& plant = cfg.plant;
  d.M0 = hnorm(plant.x0) + plant.epsilon0;
  d.cnc = make_cnc_bundle(plant.constants.C2, plant.constants.eps_star_generic);
  d.gosl = gosl_constants(plant.constants.C2, d.cnc.cnc, d.M0,
                          plant.constants.eps_star_generic);
  d.rho_eff = d.gosl.rho_tight + 2.0 * plant.L_r * d.M0;
  d.c_bplus = pinv(phi_mat(plant.B)).c_bplus;
  return d;
}

bool checked_or_plain(Report& rep, const LoadedConfig& cfg, const std::string& key,
                      double value, const std::string& formula) {
  auto it = cfg.expected.find(key);
  if (it == cfg.expected.end()) {
    rep.put(key, value, formula);
    return true;
  }
  return rep.put_checked(key, value, formula, it->second);
}

}  // namespace

int cmd_constants(const RunConfig& run) {
  LoadedConfig cfg = load_config(run.config_path);
  const PlantConfig& plant = cfg.plant;
  const BracketConstants& bc = plant.constants;
  DerivedConstants d = derive_constants(cfg);

  Report rep("bracket and growth constants");
  checked_or_plain(rep, cfg, "a_bound", bc.A, "pinned bilinear bound");
  checked_or_plain(rep, cfg, "c1", bc.C1, "pinned symmetric-defect constant");
  checked_or_plain(rep, cfg, "c2", bc.C2, "pinned jacobiator constant");
  checked_or_plain(rep, cfg, "six_c2", 6.0 * bc.C2, "6 C2");
  checked_or_plain(rep, cfg, "bracket_sq", 4.0 * plant.bracket.eps_b *
                                               plant.bracket.eps_b,
                   "4 eps_b^2, diagnostic ceiling");
  checked_or_plain(rep, cfg, "eps_star", bc.eps_star_generic,
                   "min{1/(16A), sqrt(1/(16 C1)), 1/(4 C2), eps0}");
  checked_or_plain(rep, cfg, "eps_star_antisym", bc.eps_star_antisym,
                   "min{1/(8A), 1/(4 C2), eps0}");
  checked_or_plain(rep, cfg, "m0_max", bc.eps_star_generic / std::sqrt(2.0),
                   "eps*/sqrt(2)");
  checked_or_plain(rep, cfg, "omega_op", d.cnc.omega_op, "8 C2 eps*");
  checked_or_plain(rep, cfg, "c_nc", d.cnc.cnc,
                   "min{12 C2, 3 omega_op + 6 C2}");
  rep.put("m0", d.M0, "||x0|| + epsilon0");
  checked_or_plain(rep, cfg, "deltabar_max", d.gosl.deltabar_max,
                   "6 C2 M0 (M0+eps*)^2");
  checked_or_plain(rep, cfg, "rho_tight", d.gosl.rho_tight,
                   "12 C2 (M0+eps*)(3 M0+eps*)");
  checked_or_plain(rep, cfg, "ell_tight", d.gosl.ell_tight, "4 deltabar_max");
  checked_or_plain(rep, cfg, "r_max", d.gosl.r_max, "C_nc M0 (M0+eps*)^2");
  checked_or_plain(rep, cfg, "c_bplus", d.c_bplus, "1/sigma_min(B)");

  HMatrix A_s = HMatrix::scalar(static_cast<std::size_t>(plant.n),
                                Quaternion::real(-plant.alpha_s));
  LmiProblem problem;
  problem.A_real = phi_mat(A_s);
  problem.rho_eff = d.rho_eff;
  problem.mu_Y = 0.5 * d.rho_eff;
  LmiSolution lmi = iterate_lmi(problem, cfg.beta_init);
  if (lmi.feasible) {
    checked_or_plain(rep, cfg, "beta_star", lmi.beta_star,
                     "largest feasible decay rate");
    checked_or_plain(rep, cfg, "mu_lmi", lmi.mu_lmi, "lambda_max(P*)");
    KappaParams kp;
    kp.mu_star = lmi.mu_lmi;
    kp.c_prod = op_norm(phi_mat(plant.C)) * op_norm(phi_mat(plant.B)) * d.c_bplus;
    kp.c_nc = d.cnc.cnc;
    kp.eps_star = bc.eps_star_generic;
    kp.c2 = bc.C2;
    kp.rho_eff = d.rho_eff;
    kp.mu_Y = 0.5 * d.rho_eff;
    checked_or_plain(rep, cfg, "kappa_infty", kappa_infty(kp),
                     "asymptotic disturbance gain");
  } else {
    rep.put_text("lmi", "infeasible: " + lmi.note);
  }

  std::cout << rep.render_text();
  if (!run.out_path.empty()) rep.write(run.out_path);
  return rep.all_passed() ? exit_ok : exit_check_failed;
}

int cmd_check(const RunConfig& run) {
  LoadedConfig cfg = load_config(run.config_path);
  const PlantConfig& plant = cfg.plant;
  std::uint64_t seed = run.seed.value_or(cfg.seed);
  DerivedConstants d = derive_constants(cfg);

  Report rep("structural checks");

  CmcReport cmc = cmc_check(plant.bracket, plant.B,
                            plant.constants.eps_star_generic, cfg.cmc_samples,
                            seed, cfg.cmc_tol);
  rep.put_bool("cmc_pass", cmc.pass, "max relative residual <= tol");
  rep.put("cmc_max_residual_rel", cmc.max_residual_rel,
          "max ||(I-P) d w0|| / ||d w0||");
  rep.put_int("cmc_samples", static_cast<long long>(cmc.samples),
              "ball triplets tested");

  std::size_t pairs = run.samples.value_or(cfg.gosl_pairs);
  GoslReport gr = verify_gosl(plant.bracket, plant.B, d.gosl, pairs, seed,
                              run.workers, cfg.defect_grid);
  rep.put_bool("gosl_pass", gr.violations == 0,
               "one-sided bound holds on every pair");
  rep.put_int("gosl_violations", static_cast<long long>(gr.violations),
              "pairs exceeding the bound");
  rep.put("gosl_max_slack", gr.max_slack, "max lhs - rhs");
  rep.put("gosl_max_defect_ratio", gr.max_defect_ratio,
          "max ||delta(x)|| / magnitude bound");

  /* conjugation transfers the operator norm */
  double max_diff = 0.0;
  for (int k = 0; k < 100; ++k) {
    CounterRng rng = CounterRng::for_sample(seed, 1000 + k);
    std::size_t size = 1 + static_cast<std::size_t>(k % 3);
    HMatrix T(size, size);
    for (auto& q : T.entries) q = rng.gaussian_quaternion();
    double direct = op_norm(phi_mat(T));
    ConjugatedOperator conj_op = conjugate_operator(T);
    double transferred = op_norm(real_matrix_of(
        [&](const HVector& y) { return conj_op(y); }, size));
    max_diff = std::max(max_diff, std::fabs(direct - transferred));
  }
  rep.put_bool("norm_transfer_pass", max_diff <= 1e-10,
               "||T^L|| equals ||T|| within 1e-10");
  rep.put("norm_transfer_max_diff", max_diff, "max |direct - conjugated|");

  std::cout << rep.render_text();
  if (!run.out_path.empty()) rep.write(run.out_path);
  bool ok = cmc.pass && gr.violations == 0 && max_diff <= 1e-10;
  return ok ? exit_ok : exit_check_failed;
}

int cmd_synthesize(const RunConfig& run) {
  LoadedConfig cfg = load_config(run.config_path);
  SynthesisResult res = algorithm1(cfg.plant, cfg.beta_init, cfg.max_halvings);

  Report rep("synthesis summary");
  rep.put("M0", res.M0, "design radius after halvings");
  rep.put("eps_star", res.eps_star, "admissible radius");
  rep.put("rho_eff", res.rho_eff, "rho_tight + 2 L_r M0");
  rep.put("eta", res.eta, "reaching gain");
  rep.put("lambda_peak", res.lambda_peak, "transient growth rate");
  rep.put("t_star_max", res.t_star_max, "||s0|| / eta0");
  rep.put("beta_star", res.lmi.beta_star, "largest feasible decay rate");
  rep.put("mu_lmi", res.lmi.mu_lmi, "lambda_max(P*)");
  rep.put("kappa_infty", res.kappa, "asymptotic disturbance gain");
  rep.put("c_inf", res.c_inf, "asymptotic offset");
  rep.put("R_invariance", res.R_invariance, "invariant-set radius");
  rep.put_bool("invariance_ok", res.invariance_ok, "R <= eps*");
  rep.put_bool("contraction_ok", res.contraction_ok, "R <= sqrt(2) M0");
  rep.put_int("halvings", res.halvings, "radius halvings before acceptance");
  std::cout << rep.render_text();

  std::string out = run.out_path.empty() ? "synthesis.json" : run.out_path;
  std::ofstream os(out);
  if (!os) throw config_error("cannot open output file: " + out);
  os << synthesis_to_json(cfg.plant, res).dump(2) << "\n";
  return exit_ok;
}

int cmd_simulate(const RunConfig& run) {
  LoadedConfig cfg = load_config(run.config_path);
  if (run.synthesis_path.empty()) {
    throw config_error("simulate needs --synthesis <artifact>");
  }
  std::ifstream in(run.synthesis_path);
  if (!in) throw config_error("cannot open synthesis artifact: " + run.synthesis_path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw config_error(std::string("invalid JSON in ") + run.synthesis_path + ": " +
                       e.what());
  }
  SynthesisResult synth = synthesis_from_json(doc, cfg.plant);
  SimConfig sim = cfg.sim;
  if (run.seed) sim.seed = *run.seed;

  Trajectory closed = integrate_closed_loop(cfg.plant, synth, sim);
  Trajectory reduced = integrate_reduced(cfg.plant, synth, sim);
  EnvelopeReport env = envelope_check(reduced, synth.lmi.beta_star, synth.c_inf);

  double reach_bound = hnorm(cfg.plant.s0) / cfg.plant.eta0 + 2.0 * sim.dt;
  bool reach_pass =
      closed.reaching_time >= 0.0 && closed.reaching_time <= reach_bound;

  /* step-halving consistency over a short smooth segment */
  SimConfig shorter = sim;
  shorter.t_end = 0.2;
  Trajectory coarse = integrate_closed_loop(cfg.plant, synth, shorter);
  shorter.dt = 0.5 * sim.dt;
  Trajectory fine = integrate_closed_loop(cfg.plant, synth, shorter);
  double dt_diff = hnorm(coarse.states.back() - fine.states.back());

  Report rep("simulation verdicts");
  rep.put_bool("envelope_pass", env.pass,
               "V(t) <= exp(-beta* t) V(0) + C_inf/beta* + slack");
  rep.put("envelope_max_excess", env.max_excess, "max V(t) - envelope(t)");
  rep.put_int("envelope_steps", static_cast<long long>(env.steps),
              "reduced-flow samples");
  rep.put_bool("reaching_pass", reach_pass, "T_measured <= ||s0||/eta0 + 2 dt");
  rep.put("reaching_time", closed.reaching_time, "first t with ||s|| in the layer");
  rep.put("reaching_bound", reach_bound, "||s0||/eta0 + 2 dt");
  rep.put_bool("closed_loop_bounded", !closed.diverged,
               "||x|| stayed inside the divergence guard");
  rep.put("dt_halving_diff", dt_diff,
          "||x_dt(0.2) - x_dt/2(0.2)||, integrator consistency");
  std::cout << rep.render_text();

  std::string out_dir = run.out_path.empty() ? "." : run.out_path;
  std::filesystem::create_directories(out_dir);
  write_csv(out_dir + "/closed_loop.csv", closed, cfg.plant.n, cfg.plant.m);
  write_csv(out_dir + "/reduced.csv", reduced, cfg.plant.n, cfg.plant.m);
  rep.write(out_dir + "/simulation_report.json");

  bool ok = env.pass && reach_pass && !closed.diverged && !reduced.diverged;
  return ok ? exit_ok : exit_check_failed;
}

}  // namespace qlc
