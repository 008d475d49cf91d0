#include "curvedcc/geometry.hpp"

#include <algorithm>
#include <limits>

namespace curvedcc {

void validate_configuration(const Configuration& q, Curvature k, double eps) {
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const AmbientPoint p = q.col(i);
    if (!p.allFinite()) throw ManifoldError("particle " + std::to_string(i) + " has non-finite coordinates", int(i));
    const double r = signed_dot(p, p, k) - sign(k);
    if (std::abs(r) >= eps)
      throw ManifoldError("particle " + std::to_string(i) + " violates q.q = sigma by " + std::to_string(r),
                          int(i));
    if (k == Curvature::Hyperbolic && p[3] < 1.0 - eps)
      throw ManifoldError("particle " + std::to_string(i) + " is on the lower sheet (w < 1)", int(i));
  }
}

Configuration project_to_manifold(const Configuration& q, Curvature k) {
  Configuration out = q;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const AmbientPoint p = q.col(i);
    if (k == Curvature::Spherical) {
      out.col(i) = p / p.norm();
    } else {
      const double s = -signed_dot(p, p, k);
      out.col(i) = p / std::sqrt(s);
      if (out(3, i) < 0) out.col(i) = -out.col(i);
    }
  }
  return out;
}

AnglePoint point_to_angles(const AmbientPoint& q, Curvature k) {
  if (k == Curvature::Spherical) {
    if (std::abs(q[3]) > 1e-9 || !(q[2] > 0.0))
      throw ChartError("spherical angle chart needs w = 0 and z > 0");
    const double x = std::clamp(q[0], -1.0, 1.0);
    return {std::asin(x), std::atan2(q[1], q[2])};
  }
  if (std::abs(q[2]) > 1e-9) throw ChartError("hyperbolic angle chart needs z = 0");
  return {std::asinh(q[0]), std::atanh(q[1] / q[3])};
}

Eigen::VectorXd configuration_to_angles(const Configuration& q, Curvature k) {
  const Eigen::Index n = q.cols();
  Eigen::VectorXd a(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const AnglePoint p = point_to_angles(q.col(i), k);
    a[i] = p.theta;
    a[n + i] = p.phi;
  }
  return a;
}

Eigen::Matrix4d symmetry_matrix(const SymmetryElement& g, Curvature k) {
  if (g.tau_flag && k != Curvature::Spherical) throw DomainError("tau is only an isometry of S^3");
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  const double c1 = std::cos(g.angle1), s1 = std::sin(g.angle1);
  m(0, 0) = c1;
  m(0, 1) = -s1;
  m(1, 0) = s1;
  m(1, 1) = c1;
  if (k == Curvature::Spherical) {
    const double c2 = std::cos(g.param2), s2 = std::sin(g.param2);
    m(2, 2) = c2;
    m(2, 3) = -s2;
    m(3, 2) = s2;
    m(3, 3) = c2;
  } else {
    const double c2 = std::cosh(g.param2), s2 = std::sinh(g.param2);
    m(2, 2) = c2;
    m(2, 3) = s2;
    m(3, 2) = s2;
    m(3, 3) = c2;
  }
  if (g.tau_flag) {
    Eigen::Matrix4d tau = Eigen::Matrix4d::Zero();
    tau(0, 2) = tau(1, 3) = tau(2, 0) = tau(3, 1) = 1.0;
    m = m * tau;
  }
  return m;
}

Configuration apply_symmetry(const SymmetryElement& g, const Configuration& q, Curvature k) {
  return symmetry_matrix(g, k) * q;
}

SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h, Curvature k) {
  if ((g.tau_flag || h.tau_flag) && k != Curvature::Spherical)
    throw DomainError("tau is only an isometry of S^3");
  // tau (R_a (+) R_b) = (R_b (+) R_a) tau
  if (!g.tau_flag) return {g.angle1 + h.angle1, g.param2 + h.param2, h.tau_flag};
  return {g.angle1 + h.param2, g.param2 + h.angle1, !h.tau_flag};
}

Configuration apply_tau(const Configuration& q) {
  Configuration out(4, q.cols());
  out.row(0) = q.row(2);
  out.row(1) = q.row(3);
  out.row(2) = q.row(0);
  out.row(3) = q.row(1);
  return out;
}

Configuration reflect_y(const Configuration& q) {
  Configuration out = q;
  out.row(1) = -q.row(1);
  return out;
}

double max_pointwise_distance(const Configuration& a, const Configuration& b, Curvature k) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    worst = std::max(worst, pair_trig<double>(a.col(i), b.col(i), k).dist);
  return worst;
}

double min_pair_distance(const Configuration& q, Curvature k) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q.cols(); ++i)
    for (Eigen::Index j = i + 1; j < q.cols(); ++j)
      best = std::min(best, pair_trig<double>(q.col(i), q.col(j), k).dist);
  return best;
}

Configuration boost_normalize(const Configuration& q, const MassList& m) {
  double zw = 0.0, zz_ww = 0.0;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    zw += m[int(i)] * q(2, i) * q(3, i);
    zz_ww += m[int(i)] * (q(2, i) * q(2, i) + q(3, i) * q(3, i));
  }
  // sum m z'w' = (1/2) sinh(2s) sum m (z^2 + w^2) + cosh(2s) sum m z w
  const double s = 0.5 * std::atanh(-2.0 * zw / zz_ww);
  return apply_symmetry({0.0, s, false}, q, Curvature::Hyperbolic);
}

namespace {

// Least-squares rotation angle taking the (r0, r1) rows of a onto those of b.
double procrustes_angle(const Configuration& a, const Configuration& b, int r0, int r1) {
  double cross = 0.0, dot = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    dot += a(r0, i) * b(r0, i) + a(r1, i) * b(r1, i);
    cross += a(r0, i) * b(r1, i) - a(r1, i) * b(r0, i);
  }
  return std::atan2(cross, dot);
}

template <typename F>
double golden_section(F&& f, double lo, double hi, int iters = 80) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters && (b - a) > 1e-15; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

double aligned_gap(const Configuration& a, const Configuration& b, Curvature k, int grid) {
  const double two_pi = 2.0 * std::numbers::pi;
  auto gap_at = [&](double t1, double t2) {
    return max_pointwise_distance(apply_symmetry({t1, t2, false}, a, k), b, k);
  };
  // Seed with the chordal least-squares alignment, then polish the max-distance
  // objective by golden section in a bracket around it.
  double t1 = procrustes_angle(a, b, 0, 1);
  double t2 = k == Curvature::Spherical ? procrustes_angle(a, b, 2, 3) : 0.0;
  double best = gap_at(t1, t2);
  // Coarse sweep guards against a misleading seed when the xy-moments vanish.
  const int sweep = std::max(8, grid / (k == Curvature::Spherical ? 10 : 1));
  for (int s = 0; s < sweep; ++s) {
    const double c1 = two_pi * s / sweep;
    const double v = gap_at(c1, t2);
    if (v < best) {
      best = v;
      t1 = c1;
    }
  }
  if (k == Curvature::Spherical) {
    for (int s = 0; s < sweep; ++s) {
      const double c2 = two_pi * s / sweep;
      const double v = gap_at(t1, c2);
      if (v < best) {
        best = v;
        t2 = c2;
      }
    }
  }
  const double h = two_pi / sweep;
  for (int round = 0; round < (k == Curvature::Spherical ? 4 : 1); ++round) {
    t1 = golden_section([&](double t) { return gap_at(t, t2); }, t1 - h, t1 + h);
    if (k == Curvature::Spherical) t2 = golden_section([&](double t) { return gap_at(t1, t); }, t2 - h, t2 + h);
  }
  return std::min(best, gap_at(t1, t2));
}

}  // namespace

double class_gap(const Configuration& qa, const Configuration& qb, const MassList& m, Curvature k,
                 const ClassGapOptions& opt) {
  if (qa.cols() != qb.cols() || qa.cols() != m.size())
    throw DomainError("class_gap needs configurations of equal size matching the mass list");
  Configuration a = qa, b = qb;
  if (k == Curvature::Hyperbolic) {
    a = boost_normalize(qa, m);
    b = boost_normalize(qb, m);
  }
  double gap = aligned_gap(a, b, k, opt.grid);
  if (opt.include_reflection) gap = std::min(gap, aligned_gap(reflect_y(a), b, k, opt.grid));
  return gap;
}

}  // namespace curvedcc
