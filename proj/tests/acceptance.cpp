// Acceptance driver: runs the recipe for one criterion through the runner,
// then re-checks the outcome with the reference computations in oracles.hpp.
// Prints one PASS/FAIL line and exits nonzero on failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "curvedcc/runner.hpp"
#include "curvedcc/spectral.hpp"
#include "oracles.hpp"

using namespace curvedcc;
using json = nlohmann::ordered_json;

namespace {

class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < failures_.size(); ++i) s << (i ? "; " : "") << failures_[i];
    if (count_ > static_cast<int>(failures_.size())) s << "; ... " << count_ << " failures in all";
    return s.str();
  }
  std::string note;

 private:
  std::vector<std::string> failures_;
  int count_ = 0;
};

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

struct Outcome {
  RunResult r;
  double seconds = 0.0;
  ExperimentConfig cfg;
};

Outcome run_recipe(const std::filesystem::path& dir, int criterion) {
  char prefix[8];
  std::snprintf(prefix, sizeof prefix, "%02d_", criterion);
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && e.path().extension() == ".yaml") {
      Outcome o;
      o.cfg = load_experiment_config(e.path());
      const auto t0 = std::chrono::steady_clock::now();
      o.r = run(o.cfg);
      o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return o;
    }
  }
  throw ConfigError("no recipe for criterion " + std::to_string(criterion) + " in " + dir.string());
}

void runner_assertions(const Outcome& o, Verdict& v) {
  for (const Assertion& a : o.r.assertions) v.require(a.passed, a.name + ": " + a.detail);
  v.require(o.r.exit_code == kExitPass, "runner exit code " + std::to_string(o.r.exit_code));
}

std::size_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Criteria 1 and 2: class counts, separation, residuals by reference, runtime.
void geodesic_counts(const Outcome& o, Verdict& v, bool spherical) {
  v.require(o.seconds < 10.0, "runtime " + sci(o.seconds) + " s");
  double worst_res = 0.0, min_gap = 1e300, worst_theta = 0.0;
  for (const ProblemCase& pc : o.cfg.cases) {
    const int s = sign(pc.curvature);
    const GeodesicEnumeration e = enumerate_geodesic_ccs(pc.masses, pc.c, pc.curvature, o.cfg.tol);
    const int n = pc.masses.size();
    v.require(e.classes.size() == factorial(n) / 2, "n = " + std::to_string(n) + ": " +
                                                        std::to_string(e.classes.size()) + " classes");
    for (std::size_t a = 0; a < e.classes.size(); ++a) {
      const oracle::Multiplier ref = oracle::multiplier(geodesic_angles(e.classes[a].theta), pc.masses.values(), s);
      worst_res = std::max(worst_res, ref.residual);
      for (std::size_t b = a + 1; b < e.classes.size(); ++b)
        min_gap = std::min(min_gap, class_gap(embed_geodesic(e.classes[a].theta, pc.curvature),
                                              embed_geodesic(e.classes[b].theta, pc.curvature), pc.masses,
                                              pc.curvature));
      if (spherical) {
        const double bound = pc.c < pc.masses.min() / 4 ? std::numbers::pi / 6 : std::numbers::pi / 4;
        const double th = e.classes[a].theta.cwiseAbs().maxCoeff();
        worst_theta = std::max(worst_theta, th / bound);
        v.require(pc.c < pc.masses.min() / 2, "c >= m1/2");
        v.require(th < bound, "|theta| " + sci(th) + " beyond " + sci(bound));
      }
    }
  }
  v.require(worst_res < 1e-8, "reference residual " + sci(worst_res));
  v.require(min_gap > o.cfg.tol.eps_class, "class gap " + sci(min_gap));
  v.note = "max reference residual " + sci(worst_res) + ", min class gap " + sci(min_gap) + ", " + sci(o.seconds) + " s";
  if (spherical) v.note += ", max |theta|/bound " + sci(worst_theta);
}

void inertia_theorem(const Outcome& o, Verdict& v) {
  double min_margin = 1e300;
  int checked = 0;
  for (const ProblemCase& pc : o.cfg.cases) {
    if (pc.curvature == Curvature::Spherical && !(pc.c < pc.masses.min() / 4)) continue;
    const int n = pc.masses.size(), s = sign(pc.curvature);
    const GeodesicEnumeration e = enumerate_geodesic_ccs(pc.masses, pc.c, pc.curvature, o.cfg.tol);
    for (const GeodesicCC& cc : e.classes) {
      const SpectralReport r = spectral_ordering_check(cc, pc.masses, pc.curvature, o.cfg.tol);
      v.require(r.inertia_total.triple == InertiaTriple{0, n, n - 2}, "library inertia");
      min_margin = std::min(min_margin, r.inertia_total.margin);
      const Eigen::VectorXd ev = oracle::constrained_spectrum(geodesic_angles(cc.theta), pc.masses.values(), s, cc.lambda);
      const double tol = o.cfg.tol.tol_zero_rel * ev.cwiseAbs().maxCoeff();
      const oracle::Counts c = oracle::count_signs(ev, tol);
      v.require(c.zero == 0 && c.plus == n && c.minus == n - 2, "reference inertia");
      // a difference Hessian is good to ~1e-6, so the reference margin uses that floor
      const double small = ev.cwiseAbs().minCoeff();
      v.require(small >= 10 * std::max(tol, 1e-5 * ev.cwiseAbs().maxCoeff()), "reference margin");
      ++checked;
    }
  }
  v.require(min_margin >= 10.0, "margin " + sci(min_margin));
  v.require(checked > 0, "nothing checked");
  v.note = std::to_string(checked) + " OCCs, min margin " + sci(min_margin) + " x tol_zero";
}

void eigenstructure(const Outcome& o, Verdict& v) {
  int checked = 0;
  double worst = 0.0, worst_gap = 1e300;
  for (const ProblemCase& pc : o.cfg.cases) {
    const int n = pc.masses.size(), s = sign(pc.curvature);
    const GeodesicEnumeration e = enumerate_geodesic_ccs(pc.masses, pc.c, pc.curvature, o.cfg.tol);
    for (const GeodesicCC& cc : e.classes) {
      const SpectralReport r = spectral_ordering_check(cc, pc.masses, pc.curvature, o.cfg.tol);
      worst = std::max({worst, r.c1_residual, r.c2_residual});
      const Eigen::MatrixXd A = oracle::matrix_A(cc.theta, pc.masses.values(), s);
      // M-symmetrized: M^{1/2} A M^{-1/2} has the same spectrum and is symmetric
      const Eigen::VectorXd sq = pc.masses.values().cwiseSqrt();
      const Eigen::MatrixXd S = sq.asDiagonal() * A * sq.cwiseInverse().asDiagonal();
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (S + S.transpose())).eigenvalues();
      const double two_lambda = 2 * cc.lambda, scale = ev.cwiseAbs().maxCoeff();
      int zero = -1, shifted = -1;
      for (int i = 0; i < n; ++i) {
        if (zero < 0 && std::abs(ev[i]) < 1e-9 * scale) zero = i;
        else if (shifted < 0 && std::abs(ev[i] - two_lambda) < 1e-9 * scale) shifted = i;
      }
      v.require(zero >= 0 && shifted >= 0, "reference spectrum lacks 0 or 2 lambda");
      for (int i = 0; i < n; ++i) {
        if (i == zero || i == shifted) continue;
        worst_gap = std::min(worst_gap, two_lambda - ev[i]);
        v.require(ev[i] < two_lambda - o.cfg.tol.gap_min, "eigenvalue above 2 lambda - gap_min");
      }
      const oracle::Counts c = oracle::count_signs((ev.array() - two_lambda).matrix(), 1e-9 * scale);
      v.require(c.zero == 1 && c.plus == 1 && c.minus == n - 2, "reference inertia of A - 2 lambda");
      v.require(r.inertia_A_shift.triple == InertiaTriple{1, 1, n - 2}, "library inertia of A - 2 lambda");
      ++checked;
    }
  }
  v.require(worst < 1e-9, "eigenvector residual " + sci(worst));
  v.note = std::to_string(checked) + " OCCs, max eigenvector residual " + sci(worst) + ", min gap below 2 lambda " +
           sci(worst_gap);
}

// Every class in a planar envelope, re-verified by reference.
int planar_classes(const RunResult& r, Verdict& v, double& worst_res) {
  int count = 0;
  for (const auto& c : r.envelope["results"]["cases"]) {
    const int s = c["sigma"].get<int>();
    const Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(c["masses"].get<std::vector<double>>().data(),
                                                                 static_cast<Eigen::Index>(c["masses"].size()));
    for (const auto& k : c["classes"]) {
      const std::vector<double> av = k["angles"].get<std::vector<double>>();
      const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(av.data(), static_cast<Eigen::Index>(av.size()));
      const oracle::Multiplier ref = oracle::multiplier(a, m, s);
      worst_res = std::max(worst_res, ref.residual);
      v.require(ref.lambda < 0.0, "reference lambda " + sci(ref.lambda));
      v.require(std::abs(ref.lambda - k["lambda"].get<double>()) < 1e-6 * std::max(1.0, std::abs(ref.lambda)),
                "lambda disagrees with reference");
      ++count;
    }
  }
  return count;
}

void multiplier_signs(const Outcome& o, Verdict& v) {
  double worst = 0.0;
  const int count = planar_classes(o.r, v, worst);
  v.require(count >= 100, std::to_string(count) + " instances");
  v.require(worst < 1e-7, "reference residual " + sci(worst));
  v.note = std::to_string(count) + " instances, all lambda < 0, max reference residual " + sci(worst);
}

void divergence(const Outcome& o, Verdict& v) {
  std::string slopes;
  for (const DivergenceSpec& d : o.cfg.divergence) {
    const int n = d.masses.size();
    std::vector<double> lx, ly;
    double prev = 0.0;
    bool first = true;
    const std::vector<double> grid = log_grid(d.theta_hi, d.theta_lo, d.per_decade);
    for (double t : grid) {
      Eigen::VectorXd a(2 * n);
      for (int i = 0; i < n; ++i) {
        const double ang = 2 * std::numbers::pi * (i + 1) / n;
        a[i] = std::asinh(std::sinh(t) * std::cos(ang));
        // w = cosh t and x = sinh t cos, so y / w = tanh t sin
        a[n + i] = std::atanh(std::tanh(t) * std::sin(ang));
      }
      const oracle::Multiplier ref = oracle::multiplier(a, d.masses.values(), -1, 1e-2 * t);
      v.require(ref.residual < 1e-6, "reference residual at theta " + sci(t));
      v.require(first || ref.lambda < prev, "lambda not decreasing at theta " + sci(t));
      first = false;
      prev = ref.lambda;
      double dmin = 1e300;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          // chord in the Minkowski norm, exact for short separations
          const Eigen::Vector4d dq = oracle::point(a[i], a[n + i], -1) - oracle::point(a[j], a[n + j], -1);
          dmin = std::min(dmin, 2 * std::asinh(0.5 * std::sqrt(std::max(0.0, oracle::inner(dq, dq, -1)))));
        }
      if (t <= 10 * d.theta_lo * (1 + 1e-12)) {
        lx.push_back(std::log(dmin));
        ly.push_back(std::log(std::abs(ref.lambda)));
      }
    }
    Eigen::MatrixXd X(lx.size(), 2);
    Eigen::VectorXd y(ly.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
      X(i, 0) = lx[i];
      X(i, 1) = 1.0;
      y[i] = ly[i];
    }
    const double slope = X.colPivHouseholderQr().solve(y)[0];
    v.require(std::abs(slope - d.slope_target) <= d.slope_tolerance, "reference slope " + sci(slope));
    slopes += (slopes.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + " slope " +
              std::to_string(slope);
  }
  v.note = "reference fit " + slopes;
}

// Independent sampler: Gaussian ambient perturbations pushed back to the
// manifold, rejected unless inside the ball.
void exclusion(const Outcome& o, Verdict& v) {
  std::string notes;
  const auto& results = o.r.envelope["results"]["exclusion"];
  for (std::size_t p = 0; p < o.cfg.exclusion.size(); ++p) {
    const ExclusionSpec& e = o.cfg.exclusion[p];
    const auto& rep = results[p];
    if (e.expect_excluded) {
      const int s = sign(e.center.curvature);
      v.require(oracle::I(*e.center.angles, e.center.masses.values(), s) > o.cfg.tol.eps_con, e.label + ": I(X) = 0");
      v.require(std::log10(*std::max_element(e.radii.begin(), e.radii.end()) /
                           *std::min_element(e.radii.begin(), e.radii.end())) >= 3 - 1e-9,
                e.label + ": radii span less than 3 decades");
      const double thr = e.threshold_factor * o.cfg.tol.eps_cc;
      for (const auto& row : rep["rows"])
        v.require(row["min_residual"].get<double>() > thr, e.label + ": residual at radius " + sci(row["radius"]));
      std::mt19937_64 rng(o.cfg.seed + 1000 + p);
      std::normal_distribution<double> g;
      double lowest = 1e300;
      const int n = e.center.masses.size();
      for (double rad : e.radii) {
        int used = 0;
        while (used < 500) {
          Configuration q = e.center.q;
          for (int i = 0; i < n; ++i) {
            Eigen::Vector4d d(g(rng), g(rng), g(rng), g(rng));
            q.col(i) += rad * 0.4 * d / std::sqrt(4.0);
          }
          q = project_to_manifold(q, e.center.curvature);
          if (max_pointwise_distance(q, e.center.q, e.center.curvature) > rad) continue;
          try {
            const CCResidual r = ambient_multiplier_and_residual(q, e.center.masses, e.center.curvature);
            lowest = std::min(lowest, r.degenerate ? 1e300 : r.scaled_residual);
          } catch (const SingularConfigurationError&) {
            continue;
          }
          ++used;
        }
      }
      v.require(lowest > thr, e.label + ": independent sampler found residual " + sci(lowest));
      notes += e.label + " min residual " + sci(rep["min_residual"].get<double>()) + " (independent " + sci(lowest) + "); ";
    } else {
      for (const auto& row : rep["rows"]) {
        v.require(row["family_member_inside"].get<bool>(), e.label + ": no family member at radius " + sci(row["radius"]));
        if (!row["family_member_inside"].get<bool>()) continue;
        const Configuration mem = polygon_configuration(e.center.masses.size(), row["family_theta"].get<double>(),
                                                        e.center.curvature);
        const double dist = max_pointwise_distance(mem, e.center.q, e.center.curvature);
        v.require(dist <= row["radius"].get<double>(), e.label + ": member outside the ball");
        const CCResidual r = ambient_multiplier_and_residual(mem, e.center.masses, e.center.curvature);
        v.require(r.is_occ(o.cfg.tol.eps_cc), e.label + ": member is not an OCC");
      }
      notes += e.label + " family member in all " + std::to_string(rep["rows"].size()) + " balls; ";
    }
  }
  v.note = notes;
}

void palmore(const Outcome& o, Verdict& v) {
  v.require(o.seconds < 120.0, "runtime " + sci(o.seconds) + " s");
  double worst = 0.0;
  planar_classes(o.r, v, worst);
  v.require(worst < 1e-7, "reference residual " + sci(worst));
  std::string counts;
  for (const auto& c : o.r.envelope["results"]["cases"]) {
    const int total = c["total"].get<int>(), non = c["nongeodesic"].get<int>();
    v.require(total >= 5, "total " + std::to_string(total));
    v.require(non >= 2, "non-geodesic " + std::to_string(non));
    v.require(c["geodesic_cross_match"].get<bool>(), "geodesic classes do not match");
    v.require(c["starts"].get<int>() >= 1500, "fewer than 1500 starts");
    counts += std::to_string(total) + "/" + std::to_string(non) + " ";
  }
  v.note = "total/non-geodesic per case " + counts + "in " + sci(o.seconds) + " s";
}

void relative_equilibria(const Outcome& o, Verdict& v) {
  const auto& res = o.r.envelope["results"];
  int failing = 0, total = 0, overflow = 0;
  double worst_dev = 0.0;
  for (const auto& f : res["families"]) {
    ++total;
    if (f["max_deviation"].is_number()) worst_dev = std::max(worst_dev, f["max_deviation"].get<double>());
    else ++overflow;
    if (!f["passed"].get<bool>()) ++failing;
  }
  v.require(failing == 0, std::to_string(failing) + " of " + std::to_string(total) + " families miss 1e-6");
  v.note = std::to_string(total) + " families, max finite deviation " + sci(worst_dev);
  if (overflow > 0) v.note += ", " + std::to_string(overflow) + " non-finite";
  if (res.contains("failing_max_growth_rate"))
    v.note += ", growth rates up to " + sci(res["failing_max_growth_rate"].get<double>());
}

void tau_duality(const Outcome& o, Verdict& v) {
  int checked = 0;
  double worst = 0.0;
  for (const auto& c : o.r.envelope["results"]["cases"]) {
    if (c["sigma"].get<int>() != 1) continue;
    const std::vector<double> mv = c["masses"].get<std::vector<double>>();
    const Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mv.data(), static_cast<Eigen::Index>(mv.size()));
    for (const auto& k : c["classes"]) {
      if (!k.contains("tau")) continue;
      Eigen::Matrix<double, 4, Eigen::Dynamic> q(4, mv.size());
      for (std::size_t i = 0; i < mv.size(); ++i) {
        const std::vector<double> p = k["ambient"][i].get<std::vector<double>>();
        q.col(i) << p[2], p[3], p[0], p[1];
      }
      const double lambda = k["lambda"].get<double>();
      const oracle::Multiplier ref = oracle::sphere_multiplier(q, m);
      v.require(ref.residual < 1e-7, "reference residual of tau q " + sci(ref.residual));
      v.require(std::abs(ref.lambda + lambda) < 1e-6 * std::max(1.0, std::abs(lambda)), "reference multiplier");
      const double err = k["tau"]["relative_error"].get<double>();
      worst = std::max(worst, err);
      v.require(err < 1e-9, "multiplier error " + sci(err));
      ++checked;
    }
  }
  v.require(checked >= 10, std::to_string(checked) + " spherical OCCs");
  v.note = std::to_string(checked) + " OCCs, max |lambda_tau + lambda| " + sci(worst);
}

void continuum(const Outcome& o, Verdict& v) {
  const auto& tb = o.r.envelope["results"]["two_body"];
  const double mass = tb["mass"].get<double>();
  int ok = 0;
  for (const auto& s : tb["samples"]) {
    Eigen::VectorXd a(4);
    a << s["theta1"].get<double>(), s["theta2"].get<double>(), 0.0, 0.0;
    const oracle::Multiplier ref = oracle::multiplier(a, Eigen::Vector2d(mass, mass), 1);
    const auto& t = s["inertia"];
    const bool triple_ok = t[0] == 1 && t[1] == 1 && t[2] == 0;
    const bool level = std::abs(oracle::I(a, Eigen::Vector2d(mass, mass), 1) - mass) < 1e-10;
    if (ref.residual < 1e-8 && s["residual"].get<double>() < o.cfg.tol.eps_cc && triple_ok && level) ++ok;
  }
  v.require(ok >= 20, std::to_string(ok) + " good samples");
  v.note = std::to_string(ok) + " samples on I = m with residual < eps_cc and inertia (1, 1, 0)";
}

void oracle_suite(const Outcome& o, Verdict& v) {
  const int samples = std::max(200, o.cfg.oracle_samples);
  double worst_g = 0.0, worst_h = 0.0;
  for (int s : {-1, 1}) {
    std::mt19937_64 rng(o.cfg.seed + (s > 0 ? 1 : 0));
    std::uniform_real_distribution<double> u(-1.2, 1.2), um(0.5, 2.0);
    std::uniform_int_distribution<int> un(3, 5);
    for (int done = 0; done < samples;) {
      const int n = un(rng);
      Eigen::VectorXd m(n), a(2 * n);
      for (int i = 0; i < n; ++i) m[i] = um(rng);
      for (int i = 0; i < 2 * n; ++i) a[i] = u(rng);
      const Configuration q = embed_angles<double>(a, curvature_from_sign(s));
      if (min_pair_distance(q, curvature_from_sign(s)) < 0.2) continue;
      if (s > 0 && std::numbers::pi - [&] {
            double far = 0.0;
            for (int i = 0; i < n; ++i)
              for (int j = i + 1; j < n; ++j) far = std::max(far, distance<double>(q.col(i), q.col(j), Curvature::Spherical));
            return far;
          }() < 0.2)
        continue;
      const MassList ml(m);
      const PotentialEval e = grad_angle(a, ml, curvature_from_sign(s));
      const auto fu = [&](const Eigen::VectorXd& x) { return oracle::U(x, m, s); };
      const auto fi = [&](const Eigen::VectorXd& x) { return oracle::I(x, m, s); };
      auto rel = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
        return (x - y).cwiseAbs().maxCoeff() / std::max(1.0, y.cwiseAbs().maxCoeff());
      };
      worst_g = std::max({worst_g, rel(e.gradU, oracle::gradient(fu, a)), rel(e.gradI, oracle::gradient(fi, a))});
      const double lam = -1.0;
      worst_h = std::max(worst_h, rel(hessian_angle(a, ml, curvature_from_sign(s), lam),
                                      oracle::hessian([&](const Eigen::VectorXd& x) { return fu(x) - lam * fi(x); }, a)));
      ++done;
    }
  }
  v.require(worst_g < 1e-6, "gradient error " + sci(worst_g));
  v.require(worst_h < 1e-5, "Hessian error " + sci(worst_h));
  v.note = std::to_string(samples) + " configurations per sigma, max gradient error " + sci(worst_g) +
           ", max Hessian error " + sci(worst_h);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int criterion = 0;
  std::string recipes = CURVEDCC_RECIPE_DIR;
  app.add_option("--criterion", criterion)->required()->check(CLI::Range(1, 12));
  app.add_option("--recipes", recipes)->check(CLI::ExistingDirectory);
  CLI11_PARSE(app, argc, argv);

  static const char* names[] = {"",
                                "geodesic count on H1",
                                "geodesic count on S1",
                                "inertia theorem",
                                "eigenstructure of A",
                                "multiplier signs",
                                "multiplier divergence",
                                "exclusion probes",
                                "Palmore count",
                                "relative equilibrium exactness",
                                "tau duality",
                                "degenerate continuum",
                                "oracle suite"};
  Verdict v;
  try {
    const Outcome o = run_recipe(recipes, criterion);
    runner_assertions(o, v);
    switch (criterion) {
      case 1: geodesic_counts(o, v, false); break;
      case 2: geodesic_counts(o, v, true); break;
      case 3: inertia_theorem(o, v); break;
      case 4: eigenstructure(o, v); break;
      case 5: multiplier_signs(o, v); break;
      case 6: divergence(o, v); break;
      case 7: exclusion(o, v); break;
      case 8: palmore(o, v); break;
      case 9: relative_equilibria(o, v); break;
      case 10: tau_duality(o, v); break;
      case 11: continuum(o, v); break;
      case 12: oracle_suite(o, v); break;
    }
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  std::printf("%s criterion %d (%s): %s\n", v.ok() ? "PASS" : "FAIL", criterion, names[criterion],
              v.ok() ? v.note.c_str() : (v.summary() + (v.note.empty() ? "" : " | " + v.note)).c_str());
  return v.ok() ? 0 : 1;
}
