#include "curvedcc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "curvedcc/compactness.hpp"
#include "curvedcc/dynamics.hpp"
#include "curvedcc/fd_check.hpp"
#include "curvedcc/geodesic.hpp"
#include "curvedcc/parallel.hpp"
#include "curvedcc/planar.hpp"
#include "curvedcc/spectral.hpp"

namespace curvedcc {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

std::string brief(double v) {
  if (!std::isfinite(v)) return fmt(v);
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

json matrix(const Configuration& q) {
  json a = json::array();
  for (Eigen::Index i = 0; i < q.cols(); ++i) a.push_back(vec(q.col(i)));
  return a;
}

std::string joined(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

std::string joined(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

json triple(const InertiaTriple& t) { return json::array({t.n0, t.n_plus, t.n_minus}); }

std::string triple_str(const InertiaTriple& t) {
  return "(" + std::to_string(t.n0) + "," + std::to_string(t.n_plus) + "," + std::to_string(t.n_minus) + ")";
}

json inertia_json(const Inertia& in) {
  return {{"triple", triple(in.triple)},
          {"eigenvalues", vec(in.eigenvalues)},
          {"tol_zero", num(in.tol_zero)},
          {"margin", num(in.margin)}};
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// One named pass/fail flag accumulated over many items.
struct Check {
  explicit Check(std::string n) : name(std::move(n)) {}
  std::string name;
  bool ok = true;
  int items = 0, failures = 0;
  std::string first_failure;
  std::string detail;
  void add(bool pass, const std::string& what) {
    ++items;
    if (pass) return;
    ok = false;
    if (failures++ == 0) first_failure = what;
  }
  Assertion result() const {
    std::string d = detail;
    if (!ok) d += (d.empty() ? "" : "; ") + std::to_string(failures) + " of " + std::to_string(items) + " failed, first: " + first_failure;
    else if (d.empty()) d = std::to_string(items) + " checked";
    return {name, ok && items > 0, items > 0 ? d : "nothing to check"};
  }
};

struct Ctx {
  explicit Ctx(const ExperimentConfig& c) : cfg(c) {}
  const ExperimentConfig& cfg;
  json results = json::object();
  std::vector<Assertion> assertions;
  std::vector<Table> tables;
  json timing = json::object();
  void add(const Check& c) { assertions.push_back(c.result()); }
};

std::string case_label(std::size_t i, const ProblemCase& pc) {
  return "case " + std::to_string(i) + " (sigma " + std::to_string(sign(pc.curvature)) + ", n " +
         std::to_string(pc.masses.size()) + ", c " + brief(pc.c) + ")";
}

json case_json(const ProblemCase& pc) {
  return {{"sigma", sign(pc.curvature)}, {"masses", vec(pc.masses.values())}, {"c", num(pc.c)}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void runtime_check(Ctx& x, double elapsed) {
  x.timing["elapsed_s"] = elapsed;
  if (x.cfg.max_runtime_s <= 0.0) return;
  x.assertions.push_back({"runtime", elapsed < x.cfg.max_runtime_s, "limit " + brief(x.cfg.max_runtime_s) + " s"});
}

json geodesic_cc_json(const GeodesicCC& cc) {
  return {{"ordering", cc.ordering},
          {"theta", vec(cc.theta)},
          {"lambda", num(cc.lambda)},
          {"residual", num(cc.residual)},
          {"c_achieved", num(cc.c_achieved)},
          {"min_constrained_hessian_eig", num(cc.min_constrained_hessian_eig)},
          {"iterations", cc.iterations}};
}

json spectral_json(const SpectralReport& r) {
  return {{"eigs_A", vec(r.eigs_A)},
          {"mu1", num(r.mu1)},
          {"mu2", num(r.mu2)},
          {"mu3", num(r.mu3)},
          {"two_lambda", num(r.two_lambda)},
          {"c1_residual", num(r.c1_residual)},
          {"c2_residual", num(r.c2_residual)},
          {"c1c2_M", num(r.c1c2_M)},
          {"H2_identity_error", num(r.H2_identity_error)},
          {"CMAC_row_sum_max", num(r.CMAC_row_sum_max)},
          {"M_orthogonality_error", num(r.M_orthogonality_error)},
          {"cross_block_max", num(r.cross_block_max)},
          {"H1_min_eig", num(r.H1_min_eig)},
          {"inertia_H1", inertia_json(r.inertia_H1)},
          {"inertia_H2", inertia_json(r.inertia_H2)},
          {"inertia_H2_quotient", inertia_json(r.inertia_H2_quotient)},
          {"inertia_A_shift", inertia_json(r.inertia_A_shift)},
          {"inertia_total", inertia_json(r.inertia_total)},
          {"ordering_ok", r.ordering_ok},
          {"degenerate", r.degenerate},
          {"orbit_direction_note", r.orbit_direction_note}};
}

// ---------------------------------------------------------------- solve-geodesic

void cmd_solve_geodesic(Ctx& x) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tolerances& tol = x.cfg.tol;
  Check count{"class_count"}, resid{"residuals"}, gap{"class_separation"}, neg{"multiplier_sign"},
      bounds{"angular_bounds"};
  count.detail = "n!/2 classes per case";
  resid.detail = "scaled residual < " + brief(tol.eps_cc);
  gap.detail = "min class gap > " + brief(tol.eps_class);
  bounds.detail = "|theta| < pi/4 for c < m1/2, < pi/6 for c < m1/4";
  Table t{"geodesic_classes",
          {"case", "sigma", "c", "masses", "class", "ordering", "theta", "lambda", "residual", "c_achieved",
           "min_constrained_hessian_eig"},
          {}};
  json cases = json::array();
  for (std::size_t i = 0; i < x.cfg.cases.size(); ++i) {
    const ProblemCase& pc = x.cfg.cases[i];
    const std::string label = case_label(i, pc);
    const GeodesicEnumeration e = enumerate_geodesic_ccs(pc.masses, pc.c, pc.curvature, tol, x.cfg.jobs);
    const long expected = factorial(pc.masses.size()) / 2;
    count.add(long(e.classes.size()) == expected,
              label + ": " + std::to_string(e.classes.size()) + " classes, expected " + std::to_string(expected));
    gap.add(e.min_class_gap > tol.eps_class, label + ": min class gap " + brief(e.min_class_gap));
    json cj = case_json(pc);
    cj["classes"] = json::array();
    for (std::size_t j = 0; j < e.classes.size(); ++j) {
      const GeodesicCC& cc = e.classes[j];
      resid.add(cc.residual < tol.eps_cc, label + " class " + std::to_string(j) + ": residual " + brief(cc.residual));
      neg.add(cc.lambda < 0.0, label + " class " + std::to_string(j) + ": lambda " + brief(cc.lambda));
      cj["classes"].push_back(geodesic_cc_json(cc));
      t.rows.push_back({std::to_string(i), std::to_string(sign(pc.curvature)), fmt(pc.c), joined(pc.masses.values()),
                        std::to_string(j), joined(cc.ordering), joined(cc.theta), fmt(cc.lambda), fmt(cc.residual),
                        fmt(cc.c_achieved), fmt(cc.min_constrained_hessian_eig)});
    }
    cj["min_class_gap"] = num(e.min_class_gap);
    cj["max_reversal_gap"] = num(e.max_reversal_gap);
    if (pc.curvature == Curvature::Spherical) {
      const RegimeDiagnostic rd = spherical_regime_check(pc.masses, pc.c, tol);
      bounds.add(rd.ok(), label + ": " + (rd.violations.empty() ? (rd.failures.empty() ? "" : rd.failures.front())
                                                                 : rd.violations.front()));
      cj["regime"] = {{"below_half", rd.below_half},     {"below_quarter", rd.below_quarter},
                      {"solved", rd.solved},             {"failed", rd.failed},
                      {"max_abs_theta", num(rd.max_abs_theta)}, {"violations", rd.violations}};
    }
    cases.push_back(cj);
  }
  x.results["cases"] = cases;
  x.add(count);
  x.add(resid);
  x.add(gap);
  x.add(neg);
  if (bounds.items > 0) x.add(bounds);
  x.tables.push_back(t);
  runtime_check(x, seconds_since(t0));
}

// ---------------------------------------------------------------- index

void index_supplied(Ctx& x, const ConfigurationFile& cf) {
  const Tolerances& tol = x.cfg.tol;
  const CCResidual r = cf.angles ? multiplier_and_residual(*cf.angles, cf.masses, cf.curvature)
                                 : ambient_multiplier_and_residual(cf.q, cf.masses, cf.curvature, tol.d_min);
  json out = {{"sigma", sign(cf.curvature)},
              {"masses", vec(cf.masses.values())},
              {"ambient", matrix(cf.q)},
              {"lambda", num(r.lambda)},
              {"residual", num(r.scaled_residual)},
              {"is_occ", r.is_occ(tol.eps_cc)},
              {"I", num(moment_of_inertia<double>(cf.q, cf.masses))}};
  if (cf.lambda) out["lambda_supplied"] = num(*cf.lambda);
  x.assertions.push_back({"supplied_is_occ", r.is_occ(tol.eps_cc), "scaled residual " + brief(r.scaled_residual)});
  const int n = cf.masses.size();
  const bool geodesic_chart = cf.angles && cf.angles->tail(n).cwiseAbs().maxCoeff() == 0.0;
  if (r.is_occ(tol.eps_cc) && cf.angles) {
    const Inertia in = constrained_quotient_inertia(*cf.angles, cf.masses, cf.curvature, r.lambda, tol.tol_zero_rel);
    out["inertia_quotient"] = inertia_json(in);
    if (geodesic_chart) {
      GeodesicCC cc;
      cc.theta = cf.angles->head(n);
      cc.lambda = r.lambda;
      cc.residual = r.scaled_residual;
      cc.c_achieved = moment_of_inertia<double>(cf.q, cf.masses);
      out["spectral"] = spectral_json(spectral_ordering_check(cc, cf.masses, cf.curvature, tol));
    }
  }
  x.results["supplied"] = out;
}

void cmd_index(Ctx& x) {
  const Tolerances& tol = x.cfg.tol;
  if (x.cfg.configuration) index_supplied(x, *x.cfg.configuration);

  Check inertia{"inertia_theorem"}, c1{"c1_kernel"}, c2{"c2_eigenvector"}, ord{"spectral_ordering"},
      shift{"A_shift_inertia"}, cone{"cone_inequalities"}, mc{"mc_identities"}, neg{"multiplier_sign"},
      quot{"quotient_consistency"};
  inertia.detail = "(0, n, n-2) with margin >= 10 tol_zero, hyperbolic or c < m1/4";
  c1.detail = "|A c1| < 1e-9";
  c2.detail = "|A c2 - 2 lambda c2| < 1e-9";
  ord.detail = "mu3 < 2 lambda - " + brief(tol.gap_min);
  shift.detail = "inertia(A - 2 lambda) = (1, 1, n-2)";
  mc.detail = "|sum m x z|, |sum m x w|, |sum m y z|, |sum m y w| < " + brief(tol.eps_cc);
  quot.detail = "block inertia equals the direct quotient inertia";
  Table t{"spectral",
          {"case", "sigma", "c", "class", "lambda", "mu1", "mu2", "mu3", "two_lambda", "c1_residual", "c2_residual",
           "n0", "n_plus", "n_minus", "margin", "mc_max"},
          {}};
  json cases = json::array();
  for (std::size_t i = 0; i < x.cfg.cases.size(); ++i) {
    const ProblemCase& pc = x.cfg.cases[i];
    const std::string label = case_label(i, pc);
    const int n = pc.masses.size();
    const bool applicable = pc.curvature == Curvature::Hyperbolic || pc.c < pc.masses.min() / 4;
    const GeodesicEnumeration e = enumerate_geodesic_ccs(pc.masses, pc.c, pc.curvature, tol, x.cfg.jobs);
    json cj = case_json(pc);
    cj["inertia_theorem_applies"] = applicable;
    cj["classes"] = json::array();
    for (std::size_t j = 0; j < e.classes.size(); ++j) {
      const GeodesicCC& cc = e.classes[j];
      const std::string lj = label + " class " + std::to_string(j);
      const SpectralReport rep = spectral_ordering_check(cc, pc.masses, pc.curvature, tol);
      const ConeReport cr = cone_and_inequality_checks(cc, pc.masses, pc.curvature, 200, unsigned(x.cfg.seed + j));
      const Inertia qi =
          constrained_quotient_inertia(geodesic_angles(cc.theta), pc.masses, pc.curvature, cc.lambda, tol.tol_zero_rel);
      const double mc_max = mc_identities(embed_geodesic(cc.theta, pc.curvature), pc.masses).cwiseAbs().maxCoeff();
      const InertiaTriple want{0, n, n - 2};
      if (applicable)
        inertia.add(rep.inertia_total.triple == want && rep.inertia_total.margin >= 10.0,
                    lj + ": " + triple_str(rep.inertia_total.triple) + " margin " + brief(rep.inertia_total.margin));
      c1.add(rep.c1_residual < 1e-9, lj + ": " + brief(rep.c1_residual));
      c2.add(rep.c2_residual < 1e-9, lj + ": " + brief(rep.c2_residual));
      ord.add(rep.ordering_ok, lj + ": mu3 " + brief(rep.mu3) + " vs 2 lambda " + brief(rep.two_lambda));
      shift.add(rep.inertia_A_shift.triple == InertiaTriple{1, 1, n - 2}, lj + ": " + triple_str(rep.inertia_A_shift.triple));
      cone.add(cr.ok(), lj + ": " + (cr.failures.empty() ? std::string("tangent ratios") : cr.failures.front()));
      mc.add(mc_max < tol.eps_cc, lj + ": " + brief(mc_max));
      neg.add(cc.lambda < 0.0, lj + ": lambda " + brief(cc.lambda));
      quot.add(qi.triple == rep.inertia_total.triple,
               lj + ": " + triple_str(qi.triple) + " vs " + triple_str(rep.inertia_total.triple));
      json k = geodesic_cc_json(cc);
      k["spectral"] = spectral_json(rep);
      k["cone"] = {{"tangent_ratios_monotone", cr.tangent_ratios_monotone}, {"triples_checked", cr.triples_checked},
                   {"triples_failed", cr.triples_failed},   {"min_triple_value", num(cr.min_triple_value)},
                   {"boundary_samples", cr.boundary_samples}, {"boundary_failed", cr.boundary_failed},
                   {"min_LYg", num(cr.min_LYg)}};
      k["inertia_quotient_direct"] = inertia_json(qi);
      k["mc_max"] = num(mc_max);
      cj["classes"].push_back(k);
      t.rows.push_back({std::to_string(i), std::to_string(sign(pc.curvature)), fmt(pc.c), std::to_string(j),
                        fmt(cc.lambda), fmt(rep.mu1), fmt(rep.mu2), fmt(rep.mu3), fmt(rep.two_lambda),
                        fmt(rep.c1_residual), fmt(rep.c2_residual), std::to_string(rep.inertia_total.triple.n0),
                        std::to_string(rep.inertia_total.triple.n_plus), std::to_string(rep.inertia_total.triple.n_minus),
                        fmt(rep.inertia_total.margin), fmt(mc_max)});
    }
    cases.push_back(cj);
  }
  if (!x.cfg.cases.empty()) {
    x.results["cases"] = cases;
    for (const Check* c : {&inertia, &c1, &c2, &ord, &shift, &cone, &mc, &neg, &quot})
      if (c->items > 0) x.add(*c);
    x.tables.push_back(t);
  }

  if (x.cfg.oracle_samples > 0) {
    json oracle = json::array();
    Table ft{"finite_differences", {"sigma", "samples", "max_grad_error", "max_hess_error"}, {}};
    for (Curvature k : {Curvature::Hyperbolic, Curvature::Spherical}) {
      const FDCheckReport fd = finite_difference_check(k, x.cfg.oracle_samples, x.cfg.seed, tol);
      const std::string s = k == Curvature::Spherical ? "spherical" : "hyperbolic";
      x.assertions.push_back({"fd_gradient_" + s, fd.grad_ok(),
                              "max relative error " + brief(fd.max_grad_error) + " < " + brief(fd.grad_limit)});
      x.assertions.push_back({"fd_hessian_" + s, fd.hess_ok(),
                              "max relative error " + brief(fd.max_hess_error) + " < " + brief(fd.hess_limit)});
      oracle.push_back({{"sigma", sign(k)},
                        {"samples", fd.samples},
                        {"max_grad_error", num(fd.max_grad_error)},
                        {"max_hess_error", num(fd.max_hess_error)}});
      ft.rows.push_back({std::to_string(sign(k)), std::to_string(fd.samples), fmt(fd.max_grad_error),
                         fmt(fd.max_hess_error)});
    }
    x.results["finite_differences"] = oracle;
    x.tables.push_back(ft);
  }
}

// ---------------------------------------------------------------- solve-planar / palmore-count

struct TauResult {
  double lambda = 0.0, residual = 0.0, error = 0.0;
  bool ok = false;
};

TauResult tau_check(const Configuration& q, const MassList& m, double lambda, const Tolerances& tol) {
  const CCResidual r = ambient_multiplier_and_residual(apply_tau(q), m, Curvature::Spherical, tol.d_min);
  TauResult t{r.lambda, r.scaled_residual, std::abs(r.lambda + lambda) / std::max(1.0, std::abs(lambda)), false};
  t.ok = r.is_occ(tol.eps_cc) && t.error < 1e-9;
  return t;
}

void cmd_planar(Ctx& x, bool palmore) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tolerances& tol = x.cfg.tol;
  Check neg{"multiplier_sign"}, resid{"residuals"}, cross{"geodesic_cross_match"}, ptotal{"palmore_total"},
      pnon{"palmore_nongeodesic"}, tau{"tau_duality"};
  resid.detail = "scaled residual < " + brief(tol.eps_cc);
  tau.detail = "tau q is an OCC with multiplier -lambda within 1e-9";
  Table t{"planar_classes",
          {"case", "sigma", "c", "class", "geodesic", "lambda", "residual", "I", "n0", "n_plus", "n_minus", "degenerate",
           "hits", "mirror_of", "theta", "phi"},
          {}};
  json cases = json::array();
  int instances = 0, tau_done = 0;
  for (std::size_t i = 0; i < x.cfg.cases.size(); ++i) {
    const ProblemCase& pc = x.cfg.cases[i];
    const std::string label = case_label(i, pc);
    if (pc.curvature == Curvature::Spherical && !(pc.c < pc.masses.min()))
      throw ConfigError(label + ": the spherical search needs c < min mass");
    PlanarSearchConfig sc{pc.masses, pc.c, pc.curvature, x.cfg.starts, x.cfg.seed + i, x.cfg.jobs, tol};
    const CCCatalog cat = multistart_solve(sc);
    cross.add(cat.geodesic_cross_match, label);
    if (palmore) {
      ptotal.add(cat.total >= cat.palmore_total_bound,
                 label + ": " + std::to_string(cat.total) + " < " + std::to_string(cat.palmore_total_bound));
      pnon.add(cat.nongeodesic >= cat.palmore_nongeodesic_bound,
               label + ": " + std::to_string(cat.nongeodesic) + " < " + std::to_string(cat.palmore_nongeodesic_bound));
    }
    json cj = case_json(pc);
    cj["starts"] = cat.starts;
    cj["converged"] = cat.converged;
    cj["failed"] = cat.failed;
    cj["failure_log"] = cat.failure_log;
    cj["total"] = cat.total;
    cj["geodesic"] = cat.geodesic;
    cj["nongeodesic"] = cat.nongeodesic;
    cj["total_mod_reflection"] = cat.total_mod_reflection;
    cj["nongeodesic_mod_reflection"] = cat.nongeodesic_mod_reflection;
    cj["expected_geodesic"] = cat.expected_geodesic;
    cj["geodesic_cross_match"] = cat.geodesic_cross_match;
    cj["min_class_gap"] = num(cat.min_class_gap);
    cj["palmore_total_bound"] = cat.palmore_total_bound;
    cj["palmore_nongeodesic_bound"] = cat.palmore_nongeodesic_bound;
    cj["classes"] = json::array();
    const int n = pc.masses.size();
    for (std::size_t j = 0; j < cat.classes.size(); ++j) {
      const CCSolution& s = cat.classes[j];
      const std::string lj = label + " class " + std::to_string(j);
      ++instances;
      neg.add(s.lambda < 0.0, lj + ": lambda " + brief(s.lambda));
      resid.add(s.residual < tol.eps_cc, lj + ": residual " + brief(s.residual));
      json k = {{"angles", vec(s.angles)}, {"ambient", matrix(s.q)}, {"lambda", num(s.lambda)},
                {"residual", num(s.residual)}, {"I", num(s.I)}, {"geodesic", s.geodesic},
                {"geodesic_match", s.geodesic_match}, {"mirror_of", s.mirror_of},
                {"inertia", inertia_json(s.inertia)}, {"degenerate", s.degenerate}, {"hits", s.hits}};
      if (pc.curvature == Curvature::Spherical && tau_done < x.cfg.tau_samples) {
        const TauResult tr = tau_check(s.q, pc.masses, s.lambda, tol);
        tau.add(tr.ok, lj + ": tau multiplier " + brief(tr.lambda) + ", residual " + brief(tr.residual));
        k["tau"] = {{"lambda", num(tr.lambda)}, {"residual", num(tr.residual)}, {"relative_error", num(tr.error)}};
        ++tau_done;
      }
      cj["classes"].push_back(k);
      t.rows.push_back({std::to_string(i), std::to_string(sign(pc.curvature)), fmt(pc.c), std::to_string(j),
                        s.geodesic ? "1" : "0", fmt(s.lambda), fmt(s.residual), fmt(s.I),
                        std::to_string(s.inertia.triple.n0), std::to_string(s.inertia.triple.n_plus),
                        std::to_string(s.inertia.triple.n_minus), s.degenerate ? "1" : "0", std::to_string(s.hits),
                        std::to_string(s.mirror_of), joined(Eigen::VectorXd(s.angles.head(n))),
                        joined(Eigen::VectorXd(s.angles.tail(n)))});
    }
    cases.push_back(cj);
  }
  if (!x.cfg.cases.empty()) {
    x.results["cases"] = cases;
    x.results["instances"] = instances;
    x.add(neg);
    x.add(resid);
    x.add(cross);
    if (palmore) {
      x.add(ptotal);
      x.add(pnon);
    }
    if (x.cfg.min_instances > 0)
      x.assertions.push_back({"min_instances", instances >= x.cfg.min_instances,
                              std::to_string(instances) + " solved classes, need " + std::to_string(x.cfg.min_instances)});
    if (x.cfg.tau_samples > 0) {
      tau.add(tau_done >= x.cfg.tau_samples, "only " + std::to_string(tau_done) + " spherical OCCs available");
      x.add(tau);
    }
    x.tables.push_back(t);
  }

  if (x.cfg.two_body_continuum) {
    const TwoBodyProbe p = degenerate_two_body_probe(x.cfg.two_body_mass, x.cfg.two_body_samples, x.cfg.two_body_delta, tol);
    Table tb{"two_body_continuum", {"theta1", "theta2", "lambda", "residual", "n0", "n_plus", "n_minus"}, {}};
    json samples = json::array();
    for (std::size_t j = 0; j < p.t.size(); ++j) {
      samples.push_back({{"theta1", num(p.t[j])}, {"theta2", num(p.t[j] + std::numbers::pi / 2)},
                         {"lambda", num(p.lambda[j])}, {"residual", num(p.residual[j])},
                         {"inertia", triple(p.inertia[j])}});
      tb.rows.push_back({fmt(p.t[j]), fmt(p.t[j] + std::numbers::pi / 2), fmt(p.lambda[j]), fmt(p.residual[j]),
                         std::to_string(p.inertia[j].n0), std::to_string(p.inertia[j].n_plus),
                         std::to_string(p.inertia[j].n_minus)});
    }
    x.results["two_body"] = {{"mass", num(p.mass)},
                             {"samples", samples},
                             {"samples_ok", p.samples_ok},
                             {"symmetric_ansatz_theta", num(p.symmetric_ansatz_theta)},
                             {"perturbed_c", num(p.perturbed_c)},
                             {"perturbed_classes", p.perturbed_classes},
                             {"perturbed_isolated", p.perturbed_isolated}};
    x.assertions.push_back({"continuum_samples", p.samples_ok >= x.cfg.two_body_samples,
                            std::to_string(p.samples_ok) + " of " + std::to_string(p.t.size()) +
                                " samples with residual < eps_cc and inertia (1,1,0)"});
    x.assertions.push_back({"perturbed_isolated", p.perturbed_isolated,
                            std::to_string(p.perturbed_classes) + " classes at c = m - delta, all nondegenerate"});
    x.tables.push_back(tb);
  }
  runtime_check(x, seconds_since(t0));
}

// ---------------------------------------------------------------- dynamics-verify

struct REJob {
  std::size_t case_index, class_index;
  REFamily family;
};

void cmd_dynamics(Ctx& x) {
  const Tolerances& tol = x.cfg.tol;
  std::vector<REJob> jobs;
  json cases = json::array();
  for (std::size_t i = 0; i < x.cfg.cases.size(); ++i) {
    const ProblemCase& pc = x.cfg.cases[i];
    const GeodesicEnumeration e = enumerate_geodesic_ccs(pc.masses, pc.c, pc.curvature, tol, x.cfg.jobs);
    json cj = case_json(pc);
    cj["classes"] = json::array();
    for (std::size_t j = 0; j < e.classes.size(); ++j) {
      cj["classes"].push_back(geodesic_cc_json(e.classes[j]));
      const Configuration q = embed_geodesic(e.classes[j].theta, pc.curvature);
      for (const REFamily& f : re_families_from_cc(q, e.classes[j].lambda, pc.curvature, x.cfg.s_values))
        jobs.push_back({i, j, f});
    }
    cases.push_back(cj);
  }

  std::vector<REVerification> ver(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), x.cfg.jobs, [&](int k) {
    const REJob& jb = jobs[k];
    ver[k] = verify_re(jb.family, x.cfg.cases[jb.case_index].masses, x.cfg.T, x.cfg.dt, tol.eps_dyn,
                       x.cfg.residual_samples);
  });

  Check dev{"closed_form_vs_integration"}, eom{"eom_pointwise"}, orth{"velocity_orthogonality"}, tau{"tau_duality_re"};
  dev.detail = "max deviation < " + brief(tol.eps_dyn) + " over T = " + brief(x.cfg.T);
  eom.detail = "closed form residual < " + brief(tol.eps_dyn);
  tau.detail = "A_{beta,alpha} tau q = tau A_{alpha,beta} q within 1e-9";
  std::set<REKind> kinds;
  Table t{"re_verification",
          {"case", "sigma", "class", "s", "kind", "alpha", "beta", "lambda", "max_deviation", "max_eom_residual",
           "energy_drift", "growth_rate", "linear_growth_rate", "horizon", "passed", "periodicity"},
          {}};
  std::vector<double> times;
  for (int s = 0; s <= 10; ++s) times.push_back(x.cfg.T * s / 10);
  json fams = json::array();
  double worst_horizon = std::numeric_limits<double>::infinity(), max_growth = 0.0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const REJob& jb = jobs[k];
    const REFamily& f = jb.family;
    const REVerification& v = ver[k];
    const ProblemCase& pc = x.cfg.cases[jb.case_index];
    const std::string lj = case_label(jb.case_index, pc) + " class " + std::to_string(jb.class_index) + " s " + brief(f.s) +
                           " " + to_string(f.kind);
    kinds.insert(f.kind);
    dev.add(!v.integration_terminated && v.max_deviation < tol.eps_dyn,
            lj + ": deviation " + brief(v.max_deviation) + ", growth rate " + brief(v.growth_rate) + " (linearized " +
                brief(v.linear_growth_rate) + "), horizon " +
                brief(v.horizon) + (v.note.empty() ? "" : ", " + v.note));
    eom.add(!v.precision_lost && v.max_eom_residual < tol.eps_dyn, lj + ": residual " + brief(v.max_eom_residual) +
                                                                        (v.note.empty() ? "" : ", " + v.note));
    const bool ortho = geodesic_velocity_orthogonality(f);
    orth.add(ortho, lj);
    const PeriodicityLabel per = periodicity_label(f.alpha, f.beta, f.curvature);
    json fj = {{"case", jb.case_index},
               {"class", jb.class_index},
               {"s", num(f.s)},
               {"kind", to_string(f.kind)},
               {"alpha", num(f.alpha)},
               {"beta", num(f.beta)},
               {"lambda", num(f.lambda)},
               {"max_deviation", num(v.max_deviation)},
               {"max_eom_residual", num(v.max_eom_residual)},
               {"energy_drift", num(v.energy_drift)},
               {"growth_rate", num(v.growth_rate)},
               {"linear_growth_rate", num(v.linear_growth_rate)},
               {"horizon", num(v.horizon)},
               {"passed", v.passed},
               {"integration_terminated", v.integration_terminated},
               {"precision_lost", v.precision_lost},
               {"note", v.note},
               {"velocity_orthogonal", ortho},
               {"periodicity", per.label}};
    if (per.periodic) fj["period"] = num(per.period);
    if (f.curvature == Curvature::Spherical) {
      const double te = tau_duality_error(f.base, f.alpha, f.beta, times);
      tau.add(te < 1e-9, lj + ": " + brief(te));
      fj["tau_duality_error"] = num(te);
    }
    if (!v.passed) {
      worst_horizon = std::min(worst_horizon, v.horizon);
      max_growth = std::max(max_growth, v.growth_rate);
    }
    fams.push_back(fj);
    t.rows.push_back({std::to_string(jb.case_index), std::to_string(sign(f.curvature)), std::to_string(jb.class_index),
                      fmt(f.s), to_string(f.kind), fmt(f.alpha), fmt(f.beta), fmt(f.lambda), fmt(v.max_deviation),
                      fmt(v.max_eom_residual), fmt(v.energy_drift), fmt(v.growth_rate), fmt(v.linear_growth_rate), fmt(v.horizon),
                      v.passed ? "1" : "0", per.label});
  }
  json kind_list = json::array();
  for (REKind k : kinds) kind_list.push_back(to_string(k));
  x.results["cases"] = cases;
  x.results["families"] = fams;
  x.results["kinds"] = kind_list;
  x.results["T"] = num(x.cfg.T);
  x.results["dt"] = num(x.cfg.dt);
  if (std::isfinite(worst_horizon)) {
    x.results["failing_min_horizon"] = num(worst_horizon);
    x.results["failing_max_growth_rate"] = num(max_growth);
  }
  if (x.cfg.require_all_kinds) {
    const std::set<REKind> all{REKind::Elliptic, REKind::Hyperbolic, REKind::EllipticElliptic,
                               REKind::EllipticHyperbolic};
    std::string missing;
    for (REKind k : all)
      if (!kinds.count(k)) missing += (missing.empty() ? "" : ", ") + to_string(k);
    x.assertions.push_back({"kinds_covered", missing.empty(), missing.empty() ? "all four kinds" : "missing " + missing});
  }
  x.add(dev);
  x.add(eom);
  x.add(orth);
  if (tau.items > 0) x.add(tau);
  x.tables.push_back(t);
}

// ---------------------------------------------------------------- compactness

void cmd_compactness(Ctx& x) {
  const Tolerances& tol = x.cfg.tol;
  Table dt{"divergence", {"family", "n", "theta", "lambda", "I", "min_distance", "residual"}, {}};
  json div = json::array();
  for (std::size_t i = 0; i < x.cfg.divergence.size(); ++i) {
    const DivergenceSpec& d = x.cfg.divergence[i];
    SingularFamily f{d.kind, d.masses, log_grid(d.theta_hi, d.theta_lo, d.per_decade)};
    const DivergenceScan s = multiplier_divergence_scan(f, tol);
    const std::string tag = to_string(d.kind) + "_n" + std::to_string(d.masses.size());
    json rows = json::array();
    for (const FamilyMember& r : s.rows) {
      rows.push_back({{"theta", num(r.theta)}, {"lambda", num(r.lambda)}, {"I", num(r.I)},
                      {"min_distance", num(r.min_distance)}, {"residual", num(r.residual)}});
      dt.rows.push_back({to_string(d.kind), std::to_string(d.masses.size()), fmt(r.theta), fmt(r.lambda), fmt(r.I),
                         fmt(r.min_distance), fmt(r.residual)});
    }
    div.push_back({{"family", to_string(d.kind)},
                   {"masses", vec(d.masses.values())},
                   {"rows", rows},
                   {"all_exact", s.all_exact},
                   {"all_negative", s.all_negative},
                   {"monotone", s.monotone},
                   {"slope", num(s.slope)},
                   {"fit_points", s.fit_points}});
    x.assertions.push_back({"family_exact[" + tag + "]", s.all_exact, "every member has residual < " + brief(tol.eps_cc)});
    x.assertions.push_back({"lambda_monotone[" + tag + "]", s.monotone, "lambda decreasing as theta decreases"});
    if (d.kind != FamilyKind::SCollisionAntipodal)
      x.assertions.push_back({"lambda_negative[" + tag + "]", s.all_negative, "lambda < 0 on the grid"});
    x.assertions.push_back({"divergence_slope[" + tag + "]",
                            s.fit_points >= 2 && std::abs(s.slope - d.slope_target) <= d.slope_tolerance,
                            "slope " + brief(s.slope) + ", target " + brief(d.slope_target) + " +- " +
                                brief(d.slope_tolerance)});
  }
  if (!x.cfg.divergence.empty()) {
    x.results["divergence"] = div;
    x.tables.push_back(dt);
  }

  Table et{"exclusion", {"probe", "radius", "min_residual", "samples_used", "singular_skipped", "family_inside",
                         "family_theta", "family_residual", "family_distance"}, {}};
  json exc = json::array();
  for (std::size_t i = 0; i < x.cfg.exclusion.size(); ++i) {
    const ExclusionSpec& e = x.cfg.exclusion[i];
    ExclusionProbe p;
    p.center = e.center.q;
    p.masses = e.center.masses;
    p.curvature = e.center.curvature;
    p.radii = e.radii;
    p.samples = e.samples;
    p.seed = x.cfg.seed + i;
    p.jobs = x.cfg.jobs;
    if (e.family) p.family = SingularFamily{*e.family, e.center.masses, {}};
    const ExclusionReport rep = exclusion_scan(p, tol);
    json rows = json::array();
    for (const ExclusionRow& r : rep.rows) {
      rows.push_back({{"radius", num(r.radius)}, {"min_residual", num(r.min_residual)},
                      {"samples_used", r.samples_used}, {"singular_skipped", r.singular_skipped},
                      {"family_member_inside", r.family_member_inside}, {"family_theta", num(r.family_theta)},
                      {"family_residual", num(r.family_residual)}, {"family_distance", num(r.family_distance)}});
      et.rows.push_back({e.label, fmt(r.radius), fmt(r.min_residual), std::to_string(r.samples_used),
                         std::to_string(r.singular_skipped), r.family_member_inside ? "1" : "0", fmt(r.family_theta),
                         fmt(r.family_residual), fmt(r.family_distance)});
    }
    exc.push_back({{"label", e.label},
                   {"sigma", sign(e.center.curvature)},
                   {"center", matrix(e.center.q)},
                   {"center_I", num(rep.center_I)},
                   {"center_singular", rep.center_singular},
                   {"hypothesis_holds", rep.hypothesis_holds},
                   {"rows", rows},
                   {"min_residual", num(rep.min_residual)},
                   {"monotone", rep.monotone},
                   {"monotone_noise", num(rep.monotone_noise)},
                   {"max_monotone_violation", num(rep.max_monotone_violation)},
                   {"family_in_every_ball", rep.family_in_every_ball}});
    const double thr = e.threshold_factor * tol.eps_cc;
    if (e.expect_excluded) {
      x.assertions.push_back({"exclusion[" + e.label + "]", rep.hypothesis_holds && rep.excluded(thr),
                              "min residual " + brief(rep.min_residual) + " > " + brief(thr) +
                                  (rep.hypothesis_holds ? "" : "; center does not meet the hypothesis")});
      x.assertions.push_back({"sampler_monotone[" + e.label + "]", rep.monotone,
                              "max relative violation " + brief(rep.max_monotone_violation)});
    }
    if (e.family)
      x.assertions.push_back({"family_detected[" + e.label + "]", rep.family_in_every_ball,
                              "family member with residual < eps_cc in every ball"});
  }
  if (!x.cfg.exclusion.empty()) {
    x.results["exclusion"] = exc;
    x.tables.push_back(et);
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::string Table::csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(r[i]);
    out << "\n";
  }
  return out.str();
}

RunResult run(const ExperimentConfig& cfg) {
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Ctx x{cfg};
  RunResult out;
  std::string status = "pass", error;
  try {
    if (cfg.command == "solve-geodesic") cmd_solve_geodesic(x);
    else if (cfg.command == "index") cmd_index(x);
    else if (cfg.command == "solve-planar") cmd_planar(x, false);
    else if (cfg.command == "palmore-count") cmd_planar(x, true);
    else if (cfg.command == "dynamics-verify") cmd_dynamics(x);
    else if (cfg.command == "compactness") cmd_compactness(x);
    else throw ConfigError("unknown command '" + cfg.command + "'");
    const bool all = std::all_of(x.assertions.begin(), x.assertions.end(), [](const Assertion& a) { return a.passed; });
    out.exit_code = all ? kExitPass : kExitAssertion;
    status = all ? "pass" : "assertion_failure";
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    status = "config_error";
    error = e.what();
  } catch (const Error& e) {
    out.exit_code = kExitNumerical;
    status = "numerical_failure";
    error = e.what();
  }

  json env;
  env["schema"] = "curvedcc.envelope";
  env["schema_version"] = kEnvelopeSchemaVersion;
  env["toolkit_version"] = kToolkitVersion;
  env["command"] = cfg.command;
  env["name"] = cfg.name;
  env["seed"] = cfg.seed;
  env["jobs"] = cfg.jobs;
  env["config"] = cfg.echo;
  env["started_at"] = started;
  env["wall_time_s"] = seconds_since(t0);
  env["timing"] = x.timing;
  env["status"] = status;
  env["exit_code"] = out.exit_code;
  if (!error.empty()) env["error"] = error;
  json flags = json::array();
  for (const Assertion& a : x.assertions) flags.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  env["assertions"] = flags;
  env["passed"] = out.exit_code == kExitPass;
  json tabs = json::array();
  for (const Table& t : x.tables) tabs.push_back(t.name + ".csv");
  env["tables"] = tabs;
  env["results"] = x.results;
  out.envelope = std::move(env);
  out.assertions = std::move(x.assertions);
  out.tables = std::move(x.tables);
  return out;
}

void write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "envelope.json");
    if (!f) throw ConfigError("cannot write " + (dir / "envelope.json").string());
    f << r.envelope.dump(2) << "\n";
  }
  for (const Table& t : r.tables) {
    std::ofstream f(dir / (t.name + ".csv"));
    if (!f) throw ConfigError("cannot write " + (dir / (t.name + ".csv")).string());
    f << t.csv();
  }
}

json strip_timestamps(json envelope) {
  envelope.erase("started_at");
  envelope.erase("wall_time_s");
  envelope.erase("timing");
  return envelope;
}

}  // namespace curvedcc
