#include "curvedcc/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "curvedcc/parallel.hpp"

namespace curvedcc {

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::HPolygon: return "h_polygon";
    case FamilyKind::SPolygon: return "s_polygon";
    case FamilyKind::SCollisionAntipodal: return "s_collision_antipodal";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "h_polygon") return FamilyKind::HPolygon;
  if (s == "s_polygon") return FamilyKind::SPolygon;
  if (s == "s_collision_antipodal") return FamilyKind::SCollisionAntipodal;
  throw ConfigError("unknown family kind '" + s + "'");
}

Curvature family_curvature(FamilyKind k) {
  return k == FamilyKind::HPolygon ? Curvature::Hyperbolic : Curvature::Spherical;
}

Configuration polygon_configuration(int n, double theta, Curvature k) {
  if (n < 2) throw DomainError("polygon needs n >= 2");
  if (!(theta > 0.0)) throw DomainError("polygon latitude must be positive");
  if (k == Curvature::Spherical && !(theta < std::numbers::pi / 2))
    throw DomainError("spherical polygon latitude must lie in (0, pi/2)");
  Configuration q(4, n);
  const double r = k == Curvature::Spherical ? std::sin(theta) : std::sinh(theta);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * (i + 1) / n;
    if (k == Curvature::Spherical)
      q.col(i) << r * std::cos(a), r * std::sin(a), std::cos(theta), 0.0;
    else
      q.col(i) << r * std::cos(a), r * std::sin(a), 0.0, std::cosh(theta);
  }
  return q;
}

Configuration collision_antipodal_configuration(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2))
    throw DomainError("collision-antipodal parameter must lie in (0, pi/2)");
  Configuration q(4, 3);
  q.col(0) << 1.0, 0.0, 0.0, 0.0;
  q.col(1) << -std::cos(theta), 0.0, std::sin(theta), 0.0;
  q.col(2) << -std::cos(theta), 0.0, -std::sin(theta), 0.0;
  return q;
}

FamilyMember family_member(const SingularFamily& f, double theta, const Tolerances& tol) {
  const Curvature k = family_curvature(f.kind);
  FamilyMember row;
  row.theta = theta;
  const int n = f.masses.size();
  if (f.kind == FamilyKind::SCollisionAntipodal) {
    if (n != 3 || f.masses[1] != f.masses[2])
      throw ConfigError("collision-antipodal family takes masses (m, M, M)");
    row.q = collision_antipodal_configuration(theta);
  } else {
    for (int i = 1; i < n; ++i)
      if (f.masses[i] != f.masses[0]) throw ConfigError("polygon family takes equal masses");
    row.q = polygon_configuration(n, theta, k);
  }
  const CCResidual r = ambient_multiplier_and_residual(row.q, f.masses, k, tol.d_min);
  row.lambda = r.lambda;
  row.residual = r.scaled_residual;
  row.I = moment_of_inertia<double>(row.q, f.masses);
  row.min_distance = min_pair_distance(row.q, k);
  row.exact = r.is_occ(tol.eps_cc);
  return row;
}

FamilyMember polygon_family(int n, double mass, double theta, Curvature k, const Tolerances& tol) {
  SingularFamily f;
  f.kind = k == Curvature::Spherical ? FamilyKind::SPolygon : FamilyKind::HPolygon;
  f.masses = MassList(Eigen::VectorXd::Constant(n, mass));
  return family_member(f, theta, tol);
}

std::vector<double> log_grid(double hi, double lo, int per_decade) {
  if (!(hi > lo && lo > 0.0) || per_decade < 1) throw ConfigError("log grid needs hi > lo > 0");
  const int steps = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  std::vector<double> g;
  for (int i = 0; i <= steps; ++i) g.push_back(hi * std::pow(lo / hi, double(i) / std::max(1, steps)));
  return g;
}

DivergenceScan multiplier_divergence_scan(const SingularFamily& f, const Tolerances& tol) {
  DivergenceScan s;
  std::vector<double> grid = f.grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  for (double t : grid) s.rows.push_back(family_member(f, t, tol));
  s.all_exact = std::all_of(s.rows.begin(), s.rows.end(), [](const FamilyMember& r) { return r.exact; });
  s.all_negative = std::all_of(s.rows.begin(), s.rows.end(), [](const FamilyMember& r) { return r.lambda < 0; });
  s.monotone = true;
  for (std::size_t i = 1; i < s.rows.size(); ++i)
    if (!(s.rows[i].lambda < s.rows[i - 1].lambda)) s.monotone = false;
  if (s.rows.empty()) return s;

  // least squares on the rows within a factor ten of the smallest distance
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& r : s.rows) dmin = std::min(dmin, r.min_distance);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& r : s.rows) {
    if (r.min_distance > 10.0 * dmin * (1 + 1e-9) || r.lambda == 0.0) continue;
    const double x = std::log(r.min_distance), y = std::log(std::abs(r.lambda));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  s.fit_points = cnt;
  if (cnt >= 2) {
    const double den = cnt * sxx - sx * sx;
    s.slope = den != 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
  }
  return s;
}

bool is_singular(const Configuration& q, Curvature k, double eps) {
  for (int i = 0; i < q.cols(); ++i)
    for (int j = i + 1; j < q.cols(); ++j) {
      const double d = pair_trig<double>(q.col(i), q.col(j), k).dist;
      if (d < eps) return true;
      if (k == Curvature::Spherical && std::numbers::pi - d < eps) return true;
    }
  return false;
}

bool in_admissible_set(const Configuration& q, double eps) {
  bool off_circles = false;
  for (int i = 0; i < q.cols(); ++i) {
    const bool on_xy = std::hypot(q(2, i), q(3, i)) < eps;
    const bool on_zw = std::hypot(q(0, i), q(1, i)) < eps;
    if (!on_xy && !on_zw) off_circles = true;
  }
  return off_circles && is_singular(q, Curvature::Spherical, eps);
}

namespace {

Eigen::Matrix4d rotation_xy() {
  Eigen::Matrix4d x = Eigen::Matrix4d::Zero();
  x(0, 1) = -1;
  x(1, 0) = 1;
  return x;
}

Eigen::Matrix4d second_generator(Curvature k) {
  Eigen::Matrix4d x = Eigen::Matrix4d::Zero();
  x(2, 3) = k == Curvature::Spherical ? -1 : 1;
  x(3, 2) = 1;
  return x;
}

double metric_dot(const Configuration& a, const Configuration& b, Curvature k) {
  double s = 0.0;
  for (int i = 0; i < a.cols(); ++i) s += signed_dot<double>(a.col(i), b.col(i), k);
  return s;
}

AmbientPoint tangent_part(const AmbientPoint& g, const AmbientPoint& q, Curvature k) {
  return g - sign(k) * signed_dot<double>(g, q, k) * q;
}

AmbientPoint exp_map(const AmbientPoint& q, const AmbientPoint& u, Curvature k) {
  const double r = std::sqrt(std::max(0.0, signed_dot<double>(u, u, k)));
  if (r == 0.0) return q;
  if (k == Curvature::Spherical) return std::cos(r) * q + std::sin(r) / r * u;
  return std::cosh(r) * q + std::sinh(r) / r * u;
}

}  // namespace

ExclusionReport exclusion_scan(const ExclusionProbe& p, const Tolerances& tol) {
  const Curvature k = p.curvature;
  const int n = static_cast<int>(p.center.cols());
  if (n != p.masses.size()) throw ConfigError("exclusion center does not match the mass list");
  if (p.samples < 1) throw ConfigError("exclusion scan needs at least one sample per radius");
  validate_configuration(p.center, k, tol.eps_mfld);

  ExclusionReport rep;
  rep.center_I = moment_of_inertia<double>(p.center, p.masses);
  rep.center_singular = is_singular(p.center, k);
  rep.hypothesis_holds = rep.center_singular &&
                         (k == Curvature::Hyperbolic ? rep.center_I > tol.eps_con : in_admissible_set(p.center));

  std::vector<double> radii = p.radii.empty() ? log_grid(1e-2, 1e-5, 1) : p.radii;
  std::sort(radii.begin(), radii.end(), std::greater<>());

  // orthonormal orbit directions at the center (Gram-Schmidt in the metric)
  std::vector<Configuration> orbit;
  for (const Eigen::Matrix4d& xi : {rotation_xy(), second_generator(k)}) {
    Configuration t = xi * p.center;
    for (const auto& o : orbit) t -= metric_dot(t, o, k) * o;
    const double nn = metric_dot(t, t, k);
    if (nn > 1e-20) orbit.push_back(t / std::sqrt(nn));
  }

  const int dim = 3 * n - static_cast<int>(orbit.size());
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double radius = radii[ri];
    std::vector<double> best(p.samples, std::numeric_limits<double>::infinity());
    std::vector<char> singular(p.samples, 0);
    parallel_for(p.samples, p.jobs, [&](int s) {
      std::seed_seq seq{std::uint32_t(p.seed), std::uint32_t(p.seed >> 32), std::uint32_t(ri), std::uint32_t(s)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> gauss;
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      Configuration u(4, n);
      for (int i = 0; i < n; ++i) {
        AmbientPoint g;
        for (int c = 0; c < 4; ++c) g[c] = gauss(rng);
        u.col(i) = tangent_part(g, p.center.col(i), k);
      }
      for (const auto& o : orbit) u -= metric_dot(u, o, k) * o;
      double umax = 0.0;
      for (int i = 0; i < n; ++i)
        umax = std::max(umax, std::sqrt(std::max(0.0, signed_dot<double>(u.col(i), u.col(i), k))));
      if (umax == 0.0) return;
      u *= radius * std::pow(unif(rng), 1.0 / dim) / umax;
      Configuration q(4, n);
      for (int i = 0; i < n; ++i) q.col(i) = exp_map(p.center.col(i), u.col(i), k);
      q = project_to_manifold(q, k);
      try {
        best[s] = ambient_multiplier_and_residual(q, p.masses, k, tol.d_min).scaled_residual;
      } catch (const SingularConfigurationError&) {
        singular[s] = 1;
      }
    });
    ExclusionRow row;
    row.radius = radius;
    row.min_residual = std::numeric_limits<double>::infinity();
    for (int s = 0; s < p.samples; ++s) {
      if (singular[s]) {
        ++row.singular_skipped;
        continue;
      }
      if (std::isfinite(best[s])) {
        ++row.samples_used;
        row.min_residual = std::min(row.min_residual, best[s]);
      }
    }
    if (p.family) {
      row.family_theta = radius / 2;
      const FamilyMember fm = family_member(*p.family, row.family_theta, tol);
      row.family_distance = max_pointwise_distance(fm.q, p.center, k);
      row.family_residual = fm.residual;
      row.family_member_inside = fm.exact && row.family_distance <= radius;
    }
    rep.rows.push_back(row);
  }

  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.monotone = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    rep.min_residual = std::min(rep.min_residual, rep.rows[i].min_residual);
    if (i == 0) continue;
    const double prev = rep.rows[i - 1].min_residual, cur = rep.rows[i].min_residual;
    const double violation = prev > 0.0 ? (prev - cur) / prev : 0.0;
    rep.max_monotone_violation = std::max(rep.max_monotone_violation, violation);
    if (violation > rep.monotone_noise) rep.monotone = false;
  }
  rep.family_in_every_ball =
      p.family && std::all_of(rep.rows.begin(), rep.rows.end(), [](const ExclusionRow& r) { return r.family_member_inside; });
  return rep;
}

}  // namespace curvedcc
