#include "curvedcc/planar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "curvedcc/parallel.hpp"
#include "curvedcc/potentials.hpp"

namespace curvedcc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

bool in_chart(const Eigen::VectorXd& a, Curvature k) {
  if (!a.allFinite()) return false;
  if (k == Curvature::Spherical) return a.cwiseAbs().maxCoeff() < kHalfPi - 1e-9;
  return a.cwiseAbs().maxCoeff() < 30.0;
}

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Points on the plane through exponential coordinates about the chart origin,
// scaled so that I = c.
Eigen::VectorXd place_at_level(const Eigen::MatrixXd& v, const MassList& m, double c, Curvature k) {
  const int n = m.size();
  Eigen::VectorXd r(n), dir(n);
  for (int i = 0; i < n; ++i) {
    r[i] = std::hypot(v(0, i), v(1, i));
    dir[i] = std::atan2(v(1, i), v(0, i));
  }
  const double rmax = r.maxCoeff();
  if (!(rmax > 0.0)) throw DomainError("degenerate start");
  auto radial = [k](double s) { return k == Curvature::Hyperbolic ? std::sinh(s) : std::sin(s); };
  auto inertia = [&](double s) {
    double I = 0.0;
    for (int i = 0; i < n; ++i) I += m[i] * std::pow(radial(s * r[i]), 2);
    return I;
  };
  double hi = k == Curvature::Spherical ? 0.999 * kHalfPi / rmax : 1.0 / rmax;
  if (k == Curvature::Hyperbolic)
    while (inertia(hi) < c) hi *= 2.0;
  if (inertia(hi) < c) throw DomainError("start cannot reach the inertia level");
  double lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (inertia(mid) < c ? lo : hi) = mid;
  }
  Configuration q(4, n);
  for (int i = 0; i < n; ++i) {
    const double rho = hi * r[i];
    const double x = radial(rho) * std::cos(dir[i]), y = radial(rho) * std::sin(dir[i]);
    if (k == Curvature::Hyperbolic)
      q.col(i) << x, y, 0.0, std::cosh(rho);
    else
      q.col(i) << x, y, std::cos(rho), 0.0;
  }
  return configuration_to_angles(q, k);
}

double pair_sep_floor(const Tolerances& tol) { return 1e3 * tol.d_min; }

}  // namespace

bool newton_occ(Eigen::VectorXd& angles, double& lambda, const MassList& m, double c, Curvature k,
                const Tolerances& tol, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const int n2 = int(angles.size());
  auto eval = [&](const Eigen::VectorXd& a, double l, Eigen::VectorXd& F) {
    const auto d = angle_derivatives<double>(a, m, k, false, tol.d_min);
    F.resize(n2 + 1);
    F.head(n2) = d.gradU - l * d.gradI;
    F[n2] = d.I - c;
    return d.gradU.norm();
  };
  try {
    {
      const auto d = angle_derivatives<double>(angles, m, k, false, tol.d_min);
      lambda = d.gradU.dot(d.gradI) / std::max(d.gradI.squaredNorm(), 1e-300);
    }
    Eigen::VectorXd F;
    eval(angles, lambda, F);
    int it = 0;
    for (; it < 80; ++it) {
      const auto d = angle_derivatives<double>(angles, m, k, true, tol.d_min);
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n2 + 1, n2 + 1);
      J.topLeftCorner(n2, n2) = d.hessU - lambda * d.hessI;
      J.topRightCorner(n2, 1) = -d.gradI;
      J.bottomLeftCorner(1, n2) = d.gradI.transpose();
      // J has the rotation direction in its kernel; take the minimum-norm step
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
      cod.setThreshold(1e-12);
      const Eigen::VectorXd step = cod.solve(-F);
      const double f0 = F.norm();
      double alpha = 1.0;
      bool moved = false;
      Eigen::VectorXd Fy;
      for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
        const Eigen::VectorXd y = angles + alpha * step.head(n2);
        if (!in_chart(y, k)) continue;
        try {
          eval(y, lambda + alpha * step[n2], Fy);
        } catch (const SingularConfigurationError&) {
          continue;
        }
        if (Fy.norm() < (1.0 - 1e-4 * alpha) * f0 || (Fy.norm() <= f0 && alpha * step.norm() < 1e-10)) {
          angles = y;
          lambda += alpha * step[n2];
          F = Fy;
          moved = true;
          break;
        }
      }
      if (!moved) break;
      if (alpha * step.head(n2).norm() <= tol.newton_tol * std::max(1.0, angles.norm())) break;
    }
    const CCResidual r = multiplier_and_residual(angles, m, k);
    const double I = inertia_angles(angles, m, k);
    if (r.degenerate) return fail("gradient of I vanishes");
    lambda = r.lambda;
    if (!(r.scaled_residual < tol.eps_cc)) {
      std::ostringstream s;
      s << "residual " << r.scaled_residual << " after " << it << " iterations";
      return fail(s.str());
    }
    if (std::abs(I - c) / std::max(1.0, c) >= tol.eps_con) return fail("inertia level not reached");
    if (min_pair_distance(embed_angles<double>(angles, k), k) < pair_sep_floor(tol)) return fail("near collision");
    return true;
  } catch (const Error& e) {
    return fail(e.what());
  }
}

bool is_geodesic_configuration(const Configuration& q, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(q);
  const auto& s = svd.singularValues();
  return s.size() < 3 || s[2] <= rel_tol * s[0];
}

CCCatalog multistart_solve(const PlanarSearchConfig& cfg) {
  const MassList& m = cfg.masses;
  const Curvature k = cfg.curvature;
  const int n = m.size();
  const Tolerances& tol = cfg.tol;
  if (!(cfg.c > 0.0)) throw DomainError("target inertia c must be positive");
  if (k == Curvature::Spherical && !(cfg.c < m.min()))
    throw DomainError("spherical search needs c below the smallest mass");

  CCCatalog cat;
  cat.starts = cfg.n_starts > 0 ? cfg.n_starts : 500 * n;
  cat.expected_geodesic = int(factorial(n) / 2);
  cat.palmore_total_bound = int((3 * n - 4) * factorial(n - 1) / 2);
  cat.palmore_nongeodesic_bound = int((2 * n - 4) * factorial(n - 1) / 2);

  const GeodesicEnumeration geo = enumerate_geodesic_ccs(m, cfg.c, k, tol, cfg.jobs);
  std::vector<Configuration> geo_emb;
  for (const auto& g : geo.classes) geo_emb.push_back(embed_geodesic(g.theta, k));

  struct Slot {
    bool ok = false;
    Eigen::VectorXd angles;
    double lambda = 0.0;
    std::string why;
  };
  std::vector<Slot> slots(cat.starts);
  parallel_for(cat.starts, cfg.jobs, [&](int s) {
    std::seed_seq seq{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), std::uint32_t(s)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Slot& out = slots[s];
    try {
      Eigen::VectorXd a;
      switch (s % 3) {
        case 0: {  // random points in a disc, radius stratified over starts
          Eigen::MatrixXd v(2, n);
          const double spread = 0.2 + 0.8 * (double((s / 3) % 8) + unif(rng)) / 8.0;
          for (int i = 0; i < n; ++i) {
            const double r = std::sqrt(unif(rng)), t = 2.0 * std::numbers::pi * unif(rng);
            v(0, i) = r * std::cos(t) + (1.0 - spread) * 0.1 * gauss(rng);
            v(1, i) = r * std::sin(t);
          }
          a = place_at_level(v, m, cfg.c, k);
          break;
        }
        case 1: {  // perturbed geodesic solution
          const auto& g = geo.classes[(s / 3) % geo.classes.size()];
          a = Eigen::VectorXd::Zero(2 * n);
          a.head(n) = g.theta;
          const double scale = (0.02 + 0.3 * unif(rng)) * std::max(0.1, g.theta.cwiseAbs().maxCoeff());
          for (int i = 0; i < 2 * n; ++i) a[i] += scale * gauss(rng);
          const Configuration q = embed_angles<double>(a, k);
          Eigen::MatrixXd v(2, n);
          for (int i = 0; i < n; ++i) {
            // back to exponential coordinates
            const double rho = pair_trig<double>(q.col(i), angles_to_point<double>(0.0, 0.0, k), k).dist;
            const double t = std::atan2(q(1, i), q(0, i));
            v(0, i) = rho * std::cos(t);
            v(1, i) = rho * std::sin(t);
          }
          a = place_at_level(v, m, cfg.c, k);
          break;
        }
        default: {  // regular polygon, optionally with one particle at the center
          std::vector<int> perm(n);
          std::iota(perm.begin(), perm.end(), 0);
          std::shuffle(perm.begin(), perm.end(), rng);
          const bool centered = n > 3 && ((s / 3) % 2 == 1);
          const int ring = centered ? n - 1 : n;
          const double phase = 2.0 * std::numbers::pi * unif(rng);
          Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, n);
          for (int j = 0; j < ring; ++j) {
            const double t = phase + 2.0 * std::numbers::pi * j / ring;
            v(0, perm[j]) = std::cos(t) + 0.05 * gauss(rng);
            v(1, perm[j]) = std::sin(t) + 0.05 * gauss(rng);
          }
          if (centered) {
            v(0, perm[n - 1]) = 0.05 * gauss(rng);
            v(1, perm[n - 1]) = 0.05 * gauss(rng);
          }
          a = place_at_level(v, m, cfg.c, k);
        }
      }
      out.ok = newton_occ(a, out.lambda, m, cfg.c, k, tol, &out.why);
      out.angles = a;
    } catch (const Error& e) {
      out.ok = false;
      out.why = e.what();
    }
  });

  // single-threaded reduction in start order
  std::vector<Configuration> reps;
  for (int s = 0; s < cat.starts; ++s) {
    const Slot& sl = slots[s];
    if (!sl.ok) {
      ++cat.failed;
      if (cat.failure_log.size() < 20) cat.failure_log.push_back("start " + std::to_string(s) + ": " + sl.why);
      continue;
    }
    ++cat.converged;
    const Configuration q = embed_angles<double>(sl.angles, k);
    int found = -1;
    for (size_t r = 0; r < reps.size() && found < 0; ++r) {
      const double dl = std::abs(cat.classes[r].lambda - sl.lambda);
      if (dl > 1e-6 * std::max(1.0, std::abs(sl.lambda))) continue;
      if (class_gap(reps[r], q, m, k) < tol.eps_class) found = int(r);
    }
    if (found >= 0) {
      ++cat.classes[found].hits;
      continue;
    }
    CCSolution sol;
    sol.angles = sl.angles;
    sol.q = q;
    const CCResidual res = multiplier_and_residual(sl.angles, m, k);
    sol.lambda = res.lambda;
    sol.residual = res.scaled_residual;
    sol.I = inertia_angles(sl.angles, m, k);
    sol.geodesic = is_geodesic_configuration(q);
    sol.inertia = constrained_quotient_inertia(sl.angles, m, k, sol.lambda, tol.tol_zero_rel);
    sol.degenerate = sol.inertia.triple.n0 > 0;
    sol.hits = 1;
    reps.push_back(q);
    cat.classes.push_back(std::move(sol));
  }

  cat.total = int(cat.classes.size());
  std::vector<int> geo_hits(geo_emb.size(), 0);
  bool unique_matches = true;
  for (auto& c : cat.classes) {
    c.geodesic ? ++cat.geodesic : ++cat.nongeodesic;
    if (!c.geodesic) continue;
    int matches = 0;
    for (size_t g = 0; g < geo_emb.size(); ++g)
      if (class_gap(geo_emb[g], c.q, m, k) < tol.eps_class) {
        ++matches;
        ++geo_hits[g];
        c.geodesic_match = int(g);
      }
    if (matches != 1) unique_matches = false;
  }
  cat.geodesic_cross_match = unique_matches && cat.geodesic == cat.expected_geodesic &&
                             std::all_of(geo_hits.begin(), geo_hits.end(), [](int h) { return h == 1; });

  std::vector<bool> seen(cat.classes.size(), false);
  for (size_t a = 0; a < cat.classes.size(); ++a) {
    const Configuration mirrored = reflect_y(cat.classes[a].q);
    for (size_t b = 0; b < cat.classes.size(); ++b) {
      if (std::abs(cat.classes[a].lambda - cat.classes[b].lambda) >
          1e-6 * std::max(1.0, std::abs(cat.classes[a].lambda)))
        continue;
      if (class_gap(cat.classes[b].q, mirrored, m, k) < tol.eps_class) {
        cat.classes[a].mirror_of = int(b);
        break;
      }
    }
  }
  for (size_t a = 0; a < cat.classes.size(); ++a) {
    if (seen[a]) continue;
    seen[a] = true;
    const int b = cat.classes[a].mirror_of;
    if (b >= 0) seen[b] = true;
    ++cat.total_mod_reflection;
    if (!cat.classes[a].geodesic) ++cat.nongeodesic_mod_reflection;
  }

  cat.min_class_gap = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < reps.size(); ++a)
    for (size_t b = a + 1; b < reps.size(); ++b)
      cat.min_class_gap = std::min(cat.min_class_gap, class_gap(reps[a], reps[b], m, k));
  if (reps.size() < 2) cat.min_class_gap = 0.0;
  return cat;
}

std::vector<double> critical_values_I(const MassList& m) {
  const int n = m.size();
  if (n > 24) throw DomainError("too many masses for subset enumeration");
  std::vector<double> v;
  for (long mask = 0; mask < (1L << n); ++mask) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1L << i)) s += m[i];
    v.push_back(s);
  }
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > 1e-12 * std::max(1.0, std::abs(x))) out.push_back(x);
  return out;
}

TwoBodyProbe degenerate_two_body_probe(double mass, int samples, double delta, const Tolerances& tol) {
  const MassList m{mass, mass};
  const Curvature k = Curvature::Spherical;
  TwoBodyProbe p;
  p.mass = mass;
  for (int s = 0; s < samples; ++s) {
    const double t = -kHalfPi + kHalfPi * (s + 1.0) / (samples + 1.0);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(4);
    a[0] = t;
    a[1] = t + kHalfPi;
    const CCResidual r = multiplier_and_residual(a, m, k);
    const Inertia in = constrained_quotient_inertia(a, m, k, r.lambda, tol.tol_zero_rel);
    p.t.push_back(t);
    p.lambda.push_back(r.lambda);
    p.residual.push_back(r.scaled_residual);
    p.inertia.push_back(in.triple);
    if (!r.degenerate && r.scaled_residual < tol.eps_cc && in.triple == InertiaTriple{1, 1, 0}) ++p.samples_ok;
  }
  // theta_1 = -theta_2 meets I = m only at the quarter turn
  p.symmetric_ansatz_theta = std::asin(std::sqrt(0.5));

  PlanarSearchConfig cfg;
  cfg.masses = m;
  cfg.c = mass - delta;
  cfg.curvature = k;
  cfg.n_starts = 60;
  cfg.seed = 7;
  cfg.tol = tol;
  p.perturbed_c = cfg.c;
  const CCCatalog cat = multistart_solve(cfg);
  p.perturbed_classes = cat.total;
  p.perturbed_isolated = cat.total > 0 && std::none_of(cat.classes.begin(), cat.classes.end(),
                                                       [](const CCSolution& c) { return c.degenerate; });
  return p;
}

bool three_body_s3_criterion(const Configuration& q, const MassList& m, double eps) {
  if (q.cols() != 3 || m.size() != 3) throw DomainError("three-body criterion needs exactly three bodies");
  validate_configuration(q, Curvature::Spherical);
  if (q.row(3).cwiseAbs().maxCoeff() > 1e-9) throw DomainError("three-body criterion needs a configuration on S^2_{xyz}");
  double zx = 0.0, zy = 0.0;
  for (int i = 0; i < 3; ++i) {
    zx += m[i] * q(2, i) * q(0, i);
    zy += m[i] * q(2, i) * q(1, i);
  }
  auto s3 = [&](int i, int j) {
    const double s = pair_trig<double>(q.col(i), q.col(j), Curvature::Spherical).sin_d;
    return s * s * s;
  };
  const Eigen::Vector3d z(q(2, 0), q(2, 1), q(2, 2));
  const Eigen::Vector3d s(s3(1, 2), s3(0, 2), s3(0, 1));
  const double zn = z.norm();
  const double prop = zn > 0.0 ? z.cross(s).norm() / (zn * s.norm()) : 0.0;
  const double scale = m.total();
  return std::abs(zx) < eps * scale && std::abs(zy) < eps * scale && prop < eps;
}

}  // namespace curvedcc
