#include "curvedcc/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "curvedcc/parallel.hpp"

namespace curvedcc {

namespace {

struct Trig1 {
  double s, c;  // sin/cos or sinh/cosh
};

Trig1 trig(double x, Curvature k) {
  if (k == Curvature::Hyperbolic) return {std::sinh(x), std::cosh(x)};
  return {std::sin(x), std::cos(x)};
}

std::string ordering_string(const std::vector<int>& o) {
  std::ostringstream s;
  s << '(';
  for (size_t i = 0; i < o.size(); ++i) s << (i ? "," : "") << o[i];
  s << ')';
  return s.str();
}

// Variables t are positions along the geodesic in ordering order; mp are the
// permuted masses.
struct OrderedSolver {
  MassList mp;
  double c;
  Curvature k;
  const Tolerances& tol;
  double gap_floor;

  double chart_limit() const { return std::numbers::pi / 2.0 - 1e-9; }

  bool feasible(const Eigen::VectorXd& t) const {
    if (!t.allFinite()) return false;
    for (Eigen::Index i = 0; i + 1 < t.size(); ++i)
      if (t[i + 1] - t[i] <= gap_floor) return false;
    if (k == Curvature::Spherical) {
      if (t.cwiseAbs().maxCoeff() >= chart_limit()) return false;
      if (t[t.size() - 1] - t[0] >= std::numbers::pi - gap_floor) return false;
    }
    return true;
  }

  GeodesicModel model(const Eigen::VectorXd& t, bool hess) const { return geodesic_model(t, mp, k, hess); }

  double inertia(const Eigen::VectorXd& t) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double x = trig(t[i], k).s;
      s += mp[int(i)] * x * x;
    }
    return s;
  }

  // Moves t onto {I = c} along the gradient of I.
  bool retract(Eigen::VectorXd& t) const {
    for (int it = 0; it < 60; ++it) {
      const double r = inertia(t) - c;
      if (std::abs(r) <= 1e-15 * std::max(1.0, c)) return feasible(t);
      Eigen::VectorXd a(t.size());
      for (Eigen::Index i = 0; i < t.size(); ++i) a[i] = mp[int(i)] * trig(2.0 * t[i], k).s;
      const double aa = a.squaredNorm();
      if (aa == 0.0) return false;
      t -= (r / aa) * a;
      if (!feasible(t)) return false;
    }
    return std::abs(inertia(t) - c) <= 1e-13 * std::max(1.0, c) && feasible(t);
  }

  Eigen::VectorXd initial_guess() const {
    const int n = mp.size();
    Eigen::VectorXd base(n);
    for (int i = 0; i < n; ++i) base[i] = i - 0.5 * (n - 1);
    base.array() -= base.dot(mp.values()) / mp.total();
    double hi = 1.0;
    if (k == Curvature::Spherical) {
      // keep the whole arc inside the chart
      hi = 0.999 * std::min(chart_limit() / base.cwiseAbs().maxCoeff(), std::numbers::pi / (base[n - 1] - base[0]));
      if (inertia(hi * base) < c)
        throw SolverError("ordering has no point with I = c inside the spherical chart");
    } else {
      while (inertia(hi * base) < c) hi *= 2.0;
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inertia(mid * base) < c ? lo : hi) = mid;
    }
    Eigen::VectorXd t = hi * base;
    if (!retract(t)) throw SolverError("could not place the initial guess on I = c");
    return t;
  }

  static Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& a) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(a.size(), a.size());
    return Q.rightCols(a.size() - 1);
  }

  static double multiplier(const GeodesicModel& g) { return g.gradU.dot(g.gradI) / g.gradI.squaredNorm(); }

  // Descent on U restricted to {I = c}, then Newton on the KKT system.
  std::pair<Eigen::VectorXd, int> solve() const {
    Eigen::VectorXd t = initial_guess();
    int iter = 0;
    const double switch_tol = 1e-7;
    for (; iter < tol.max_iter; ++iter) {
      const GeodesicModel g = model(t, true);
      const double lam = multiplier(g);
      const Eigen::VectorXd p = g.gradU - lam * g.gradI;
      const double scaled = p.norm() / std::max(1.0, g.gradU.norm());
      const Eigen::MatrixXd Z = tangent_basis(g.gradI);
      const Eigen::MatrixXd H = g.hessU - lam * g.hessI;
      Eigen::MatrixXd Hr = Z.transpose() * H * Z;
      Hr = 0.5 * (Hr + Hr.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hr);
      const double emin = es.eigenvalues().minCoeff();
      if (scaled < switch_tol && emin > 0.0) break;
      const double emax = std::max(std::abs(es.eigenvalues().maxCoeff()), 1e-12);
      const double shift = emin > 1e-8 * emax ? 0.0 : -emin + 1e-3 * emax;
      const Eigen::MatrixXd Hs = Hr + shift * Eigen::MatrixXd::Identity(Hr.rows(), Hr.cols());
      const Eigen::VectorXd dir = -Z * Hs.llt().solve(Z.transpose() * p);
      const double slope = p.dot(dir);
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        Eigen::VectorXd y = t + alpha * dir;
        if (!feasible(y) || !retract(y)) continue;
        if (model(y, false).U <= g.U + 1e-4 * alpha * slope) {
          t = y;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (scaled < 1e-5) break;  // roundoff in U; let Newton finish
        throw SolverError("line search stalled");
      }
    }

    // KKT Newton on (grad U - lambda grad I, I - c).
    const int n = mp.size();
    double lam = multiplier(model(t, false));
    auto kkt_norm = [&](const GeodesicModel& g, double l) {
      return std::hypot((g.gradU - l * g.gradI).norm(), g.I - c);
    };
    for (int it = 0; it < 30; ++it, ++iter) {
      const GeodesicModel g = model(t, true);
      Eigen::VectorXd F(n + 1);
      F.head(n) = g.gradU - lam * g.gradI;
      F[n] = g.I - c;
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
      J.topLeftCorner(n, n) = g.hessU - lam * g.hessI;
      J.topRightCorner(n, 1) = -g.gradI;
      J.bottomLeftCorner(1, n) = g.gradI.transpose();
      const Eigen::VectorXd step = J.fullPivLu().solve(-F);
      const double f0 = F.norm();
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
        const Eigen::VectorXd y = t + alpha * step.head(n);
        if (!feasible(y)) continue;
        const double l = lam + alpha * step[n];
        if (kkt_norm(model(y, false), l) < f0) {
          t = y;
          lam = l;
          moved = true;
          break;
        }
      }
      if (!moved || step.head(n).norm() <= tol.newton_tol * std::max(1.0, t.norm())) break;
    }
    return {t, iter};
  }
};

}  // namespace

GeodesicModel geodesic_model(const Eigen::VectorXd& theta, const MassList& m, Curvature k, bool with_hessian) {
  const int n = m.size();
  if (theta.size() != n) throw DomainError("theta does not match the mass list");
  GeodesicModel g;
  g.gradU = Eigen::VectorXd::Zero(n);
  g.gradI = Eigen::VectorXd::Zero(n);
  if (with_hessian) {
    g.hessU = Eigen::MatrixXd::Zero(n, n);
    g.hessI = Eigen::MatrixXd::Zero(n, n);
  }
  for (int i = 0; i < n; ++i) {
    const Trig1 a = trig(theta[i], k);
    const Trig1 b = trig(2.0 * theta[i], k);
    g.I += m[i] * a.s * a.s;
    g.gradI[i] = m[i] * b.s;
    if (with_hessian) g.hessI(i, i) = 2.0 * m[i] * b.c;
  }
  const double d_min = default_tolerances().d_min;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double u = theta[j] - theta[i];
      const double d = std::abs(u);
      if (d < d_min || (k == Curvature::Spherical && std::numbers::pi - d < d_min))
        throw SingularConfigurationError("particles " + std::to_string(i) + " and " + std::to_string(j) +
                                             " collide on the geodesic",
                                         i, j);
      const Trig1 t = trig(d, k);
      const double mm = m[i] * m[j];
      g.U += mm * t.c / t.s;
      // d/d theta_i of cot|theta_j - theta_i| is sign(u) / sin^2 d
      const double g1 = mm * (u > 0 ? 1.0 : -1.0) / (t.s * t.s);
      g.gradU[i] += g1;
      g.gradU[j] -= g1;
      if (with_hessian) {
        const double h = 2.0 * mm * t.c / (t.s * t.s * t.s);
        g.hessU(i, i) += h;
        g.hessU(j, j) += h;
        g.hessU(i, j) -= h;
        g.hessU(j, i) -= h;
      }
    }
  return g;
}

Eigen::VectorXd geodesic_cc_residual(const Eigen::VectorXd& theta, const MassList& m, Curvature k, double lambda) {
  const GeodesicModel g = geodesic_model(theta, m, k, false);
  return g.gradU - lambda * g.gradI;
}

Configuration embed_geodesic(const Eigen::VectorXd& theta, Curvature k) {
  Configuration q(4, theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) q.col(i) = angles_to_point<double>(theta[i], 0.0, k);
  return q;
}

GeodesicCC solve_ordering(const OrderingProblem& p, const Tolerances& tol) {
  const int n = p.masses.size();
  if (int(p.ordering.size()) != n) throw DomainError("ordering length does not match the mass list");
  {
    std::vector<int> s = p.ordering;
    std::sort(s.begin(), s.end());
    for (int i = 0; i < n; ++i)
      if (s[i] != i) throw DomainError("ordering is not a permutation of 0..n-1");
  }
  if (!(p.c > 0.0)) throw DomainError("target inertia c must be positive");

  Eigen::VectorXd mp(n);
  for (int i = 0; i < n; ++i) mp[i] = p.masses[p.ordering[i]];
  OrderedSolver solver{MassList(mp), p.c, p.curvature, tol, 10.0 * tol.d_min};
  auto [t, iters] = solver.solve();

  GeodesicCC out;
  out.theta.resize(n);
  for (int i = 0; i < n; ++i) out.theta[p.ordering[i]] = t[i];
  out.ordering = p.ordering;
  out.iterations = iters;

  const GeodesicModel g = geodesic_model(out.theta, p.masses, p.curvature, true);
  out.lambda = g.gradU.dot(g.gradI) / g.gradI.squaredNorm();
  out.residual = (g.gradU - out.lambda * g.gradI).norm() / std::max(1.0, g.gradU.norm());
  out.c_achieved = g.I;
  const Eigen::MatrixXd Z = OrderedSolver::tangent_basis(g.gradI);
  Eigen::MatrixXd Hr = Z.transpose() * (g.hessU - out.lambda * g.hessI) * Z;
  Hr = 0.5 * (Hr + Hr.transpose());
  out.min_constrained_hessian_eig = n > 1 ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hr).eigenvalues().minCoeff() : 0.0;

  const std::string tag = " for ordering " + ordering_string(p.ordering);
  if (std::abs(out.c_achieved - p.c) / std::max(1.0, p.c) >= tol.eps_con)
    throw SolverError("constraint I = c violated" + tag);
  if (!(out.residual < tol.eps_cc)) throw SolverError("no convergence after " + std::to_string(iters) + " iterations" + tag);
  return out;
}

std::vector<std::vector<int>> all_orderings(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

GeodesicEnumeration enumerate_geodesic_ccs(const MassList& m, double c, Curvature k, const Tolerances& tol,
                                           int jobs) {
  const auto orders = all_orderings(m.size());
  GeodesicEnumeration e;
  e.solutions.resize(orders.size());
  parallel_for(int(orders.size()), jobs, [&](int i) { e.solutions[i] = solve_ordering({m, c, k, orders[i]}, tol); });

  std::vector<Configuration> emb;
  for (const auto& s : e.solutions) emb.push_back(embed_geodesic(s.theta, k));
  e.class_of.assign(e.solutions.size(), -1);
  std::vector<int> reps;
  for (size_t i = 0; i < e.solutions.size(); ++i) {
    for (size_t r = 0; r < reps.size(); ++r)
      if (class_gap(emb[reps[r]], emb[i], m, k) < tol.eps_class) {
        e.class_of[i] = int(r);
        break;
      }
    if (e.class_of[i] < 0) {
      e.class_of[i] = int(reps.size());
      reps.push_back(int(i));
      e.classes.push_back(e.solutions[i]);
    }
  }
  for (size_t i = 0; i < orders.size(); ++i) {
    std::vector<int> rev(orders[i].rbegin(), orders[i].rend());
    const size_t j = std::find(orders.begin(), orders.end(), rev) - orders.begin();
    if (j > i) e.max_reversal_gap = std::max(e.max_reversal_gap, class_gap(emb[i], emb[j], m, k));
  }
  e.min_class_gap = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < reps.size(); ++a)
    for (size_t b = a + 1; b < reps.size(); ++b)
      e.min_class_gap = std::min(e.min_class_gap, class_gap(emb[reps[a]], emb[reps[b]], m, k));
  return e;
}

RegimeDiagnostic spherical_regime_check(const MassList& m, double c, const Tolerances& tol) {
  RegimeDiagnostic d;
  d.c = c;
  d.m_min = m.min();
  d.below_half = c < d.m_min / 2.0;
  d.below_quarter = c < d.m_min / 4.0;
  for (const auto& o : all_orderings(m.size())) {
    try {
      const GeodesicCC s = solve_ordering({m, c, Curvature::Spherical, o}, tol);
      ++d.solved;
      const double mx = s.theta.cwiseAbs().maxCoeff();
      d.max_abs_theta = std::max(d.max_abs_theta, mx);
      if (d.below_half && !(mx < std::numbers::pi / 4.0))
        d.violations.push_back("ordering " + ordering_string(o) + ": |theta| reaches pi/4");
      if (d.below_quarter && !(mx < std::numbers::pi / 6.0))
        d.violations.push_back("ordering " + ordering_string(o) + ": |theta| reaches pi/6");
      if (!(s.lambda < 0.0)) d.violations.push_back("ordering " + ordering_string(o) + ": lambda is not negative");
    } catch (const Error& e) {
      ++d.failed;
      d.failures.push_back("ordering " + ordering_string(o) + ": " + e.what());
    }
  }
  return d;
}

}  // namespace curvedcc
