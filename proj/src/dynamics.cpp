#include "curvedcc/dynamics.hpp"

#include <cmath>
#include <limits>

#include "curvedcc/potentials.hpp"

namespace curvedcc {

Configuration eom_rhs(const State& s, const MassList& m, Curvature k, double d_min) {
  const Configuration f = potential_force(s.q, m, k, d_min);
  Configuration a(4, s.q.cols());
  const double sg = sign(k);
  for (Eigen::Index i = 0; i < s.q.cols(); ++i) {
    const AmbientPoint v = s.v.col(i);
    a.col(i) = f.col(i) / m[int(i)] - sg * signed_dot(v, v, k) * s.q.col(i);
  }
  return a;
}

double kinetic_energy(const State& s, const MassList& m, Curvature k) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < s.v.cols(); ++i) {
    const AmbientPoint v = s.v.col(i);
    e += 0.5 * m[int(i)] * signed_dot(v, v, k);
  }
  return e;
}

double total_energy(const State& s, const MassList& m, Curvature k) {
  return kinetic_energy(s, m, k) - potential<double>(s.q, m, k);
}

Eigen::Vector2d plane_momenta(const State& s, const MassList& m, Curvature k) {
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  const Eigen::Matrix4d xi1 = re_generator(1.0, 0.0, k), xi2 = re_generator(0.0, 1.0, k);
  for (Eigen::Index i = 0; i < s.q.cols(); ++i) {
    const AmbientPoint v = s.v.col(i);
    p[0] += m[int(i)] * signed_dot(AmbientPoint(xi1 * s.q.col(i)), v, k);
    p[1] += m[int(i)] * signed_dot(AmbientPoint(xi2 * s.q.col(i)), v, k);
  }
  return p;
}

State project_state(const State& s, Curvature k) {
  State out = s;
  out.q = project_to_manifold(s.q, k);
  for (Eigen::Index i = 0; i < s.q.cols(); ++i) {
    const AmbientPoint q = out.q.col(i);
    const AmbientPoint v = out.v.col(i);
    out.v.col(i) = v - (signed_dot(q, v, k) / signed_dot(q, q, k)) * q;
  }
  return out;
}

namespace {

double constraint_drift(const State& s, Curvature k) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < s.q.cols(); ++i) {
    const AmbientPoint q = s.q.col(i), v = s.v.col(i);
    d = std::max(d, std::abs(signed_dot(q, q, k) - sign(k)));
    d = std::max(d, std::abs(signed_dot(q, v, k)) / std::max(1.0, v.norm()));
  }
  return d;
}

}  // namespace

Trajectory integrate(const State& s0, const MassList& m, Curvature k, double T, double dt, int sample_every,
                     const std::function<void(const State&)>& observer) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw DomainError("integration needs dt > 0 and T >= 0");
  validate_configuration(s0.q, k);
  Trajectory tr;
  State s = s0;
  const double e0 = total_energy(s, m, k);
  const Eigen::Vector2d p0 = plane_momenta(s, m, k);
  const long steps = std::lround(T / dt);
  const double h = steps > 0 ? T / double(steps) : 0.0;
  const double d_min = default_tolerances().d_min;
  auto record = [&](const State& st, double drift) {
    tr.samples.push_back({st.t, st.q, st.v, total_energy(st, m, k), drift});
  };
  record(s, 0.0);
  auto deriv = [&](const State& st) { return std::pair{st.v, eom_rhs(st, m, k, d_min)}; };
  try {
    for (long n = 1; n <= steps; ++n) {
      const auto [k1q, k1v] = deriv(s);
      State a{s.q + 0.5 * h * k1q, s.v + 0.5 * h * k1v, s.t + 0.5 * h};
      const auto [k2q, k2v] = deriv(a);
      State b{s.q + 0.5 * h * k2q, s.v + 0.5 * h * k2v, s.t + 0.5 * h};
      const auto [k3q, k3v] = deriv(b);
      State c{s.q + h * k3q, s.v + h * k3v, s.t + h};
      const auto [k4q, k4v] = deriv(c);
      State next{s.q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
                 s.v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v), s0.t + n * h};
      const double drift = constraint_drift(next, k);
      tr.max_constraint_drift = std::max(tr.max_constraint_drift, drift);
      s = project_state(next, k);
      if (min_pair_distance(s.q, k) < d_min) throw SingularConfigurationError("pair distance below d_min", -1, -1);
      const double e = total_energy(s, m, k);
      tr.energy_drift = std::max(tr.energy_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
      const Eigen::Vector2d p = plane_momenta(s, m, k);
      tr.momentum_drift = std::max(tr.momentum_drift, (p - p0).cwiseAbs().maxCoeff() / std::max(1.0, p0.cwiseAbs().maxCoeff()));
      if (observer) observer(s);
      if (sample_every > 0 && n % sample_every == 0) record(s, drift);
    }
  } catch (const SingularConfigurationError& e) {
    tr.terminated = true;
    tr.termination_reason = e.what();
  }
  tr.final_state = s;
  return tr;
}

std::string to_string(REKind k) {
  switch (k) {
    case REKind::Elliptic: return "elliptic";
    case REKind::Hyperbolic: return "hyperbolic";
    case REKind::EllipticElliptic: return "elliptic-elliptic";
    case REKind::EllipticHyperbolic: return "elliptic-hyperbolic";
    case REKind::Equilibrium: return "equilibrium";
  }
  return "unknown";
}

REKind classify_re(double alpha, double beta, Curvature k) {
  const bool a0 = alpha == 0.0, b0 = beta == 0.0;
  if (a0 && b0) return REKind::Equilibrium;
  if (b0) return REKind::Elliptic;
  if (a0) return k == Curvature::Hyperbolic ? REKind::Hyperbolic : REKind::Elliptic;
  return k == Curvature::Hyperbolic ? REKind::EllipticHyperbolic : REKind::EllipticElliptic;
}

Eigen::Vector2d re_parameters(double lambda, double s, Curvature k) {
  if (lambda == 0.0) throw DomainError("a zero multiplier belongs to a special configuration");
  if (k == Curvature::Hyperbolic) {
    if (lambda > 0.0) throw DomainError("hyperbolic OCCs have negative multipliers");
    const double r = std::sqrt(-2.0 * lambda);
    // exact zeros at the quarter turns keep the kind classification clean
    const double cs = std::abs(std::remainder(s - std::numbers::pi / 2, std::numbers::pi)) < 1e-15 ? 0.0 : std::cos(s);
    const double sn = std::abs(std::remainder(s, std::numbers::pi)) < 1e-15 ? 0.0 : std::sin(s);
    return {r * cs, r * sn};
  }
  if (lambda < 0.0) {
    const double r = std::sqrt(-2.0 * lambda);
    return {r * std::cosh(s), r * std::sinh(s)};
  }
  const double r = std::sqrt(2.0 * lambda);
  return {r * std::sinh(s), r * std::cosh(s)};
}

std::vector<REFamily> re_families_from_cc(const Configuration& q, double lambda, Curvature k,
                                          const std::vector<double>& s_grid) {
  std::vector<REFamily> out;
  for (double s : s_grid) {
    const Eigen::Vector2d ab = re_parameters(lambda, s, k);
    out.push_back({ab[0], ab[1], s, classify_re(ab[0], ab[1], k), lambda, q, k});
  }
  return out;
}

Eigen::Matrix4d re_generator(double alpha, double beta, Curvature k) {
  Eigen::Matrix4d xi = Eigen::Matrix4d::Zero();
  xi(0, 1) = -alpha;
  xi(1, 0) = alpha;
  xi(2, 3) = k == Curvature::Spherical ? -beta : beta;
  xi(3, 2) = beta;
  return xi;
}

Eigen::Matrix4d re_matrix(double alpha, double beta, double t, Curvature k) {
  return symmetry_matrix({alpha * t, beta * t, false}, k);
}

State re_state(const REFamily& f, double t) {
  const Eigen::Matrix4d Q = re_matrix(f.alpha, f.beta, t, f.curvature);
  const Eigen::Matrix4d xi = re_generator(f.alpha, f.beta, f.curvature);
  return {Q * f.base, Q * xi * f.base, t};
}

double re_linear_growth_rate(const REFamily& f, const MassList& m) {
  const Curvature k = f.curvature;
  const int n = static_cast<int>(f.base.cols());
  const int dim = 8 * n;
  const Eigen::Matrix4d xi = re_generator(f.alpha, f.beta, k);
  // co-moving state (p, w) with q = Q p, v = Q w; the relative equilibrium is (base, xi base)
  auto field = [&](const Eigen::VectorXd& z) {
    State s;
    s.q = Eigen::Map<const Configuration>(z.data(), 4, n);
    s.v = Eigen::Map<const Configuration>(z.data() + 4 * n, 4, n);
    Eigen::VectorXd out(dim);
    Eigen::Map<Configuration>(out.data(), 4, n) = s.v - xi * s.q;
    Eigen::Map<Configuration>(out.data() + 4 * n, 4, n) = eom_rhs(s, m, k) - xi * s.v;
    return out;
  };
  Eigen::VectorXd z0(dim);
  Eigen::Map<Configuration>(z0.data(), 4, n) = f.base;
  Eigen::Map<Configuration>(z0.data() + 4 * n, 4, n) = xi * f.base;
  const double h = 1e-6 * std::max(1.0, z0.cwiseAbs().maxCoeff());
  Eigen::MatrixXd J(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd a = z0, b = z0;
    a[j] += h;
    b[j] -= h;
    J.col(j) = (field(a) - field(b)) / (2 * h);
  }
  // constraints <p_i, p_i> = sigma and <p_i, w_i> = 0
  const Eigen::Vector4d eta(1, 1, 1, sign(k));
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n, dim);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector4d p = f.base.col(i), w = xi * f.base.col(i);
    G.block(2 * i, 4 * i, 1, 4) = 2.0 * eta.cwiseProduct(p).transpose();
    G.block(2 * i + 1, 4 * i, 1, 4) = eta.cwiseProduct(w).transpose();
    G.block(2 * i + 1, 4 * n + 4 * i, 1, 4) = eta.cwiseProduct(p).transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeFullV);
  const Eigen::MatrixXd N = svd.matrixV().rightCols(dim - 2 * n);
  const Eigen::MatrixXd B = N.transpose() * J * N;
  const Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
  return es.eigenvalues().real().maxCoeff();
}

REVerification verify_re(const REFamily& f, const MassList& m, double T, double dt, double eps_dyn,
                         int residual_samples) {
  REVerification r;
  r.linear_growth_rate = re_linear_growth_rate(f, m);
  const Curvature k = f.curvature;
  const Eigen::Matrix4d xi = re_generator(f.alpha, f.beta, k);
  try {
    for (int i = 0; i <= residual_samples; ++i) {
      const double t = T * i / std::max(1, residual_samples);
      const State s = re_state(f, t);
      const Configuration a = re_matrix(f.alpha, f.beta, t, k) * xi * xi * f.base;
      const Eigen::Matrix4d back = re_matrix(f.alpha, f.beta, -t, k);
      const Configuration err = back * (a - eom_rhs(s, m, k));
      const double scale = std::max(1.0, (back * a).cwiseAbs().maxCoeff());
      r.max_eom_residual = std::max(r.max_eom_residual, err.cwiseAbs().maxCoeff() / scale);
    }
  } catch (const Error& e) {
    r.precision_lost = true;
    r.max_eom_residual = std::numeric_limits<double>::infinity();
    r.note = std::string("closed form not evaluable in ambient coordinates: ") + e.what();
  }

  // log-deviation samples for the growth fit
  std::vector<std::pair<double, double>> growth;
  bool within = true;
  const State s0 = re_state(f, 0.0);
  const Trajectory tr = integrate(s0, m, k, T, dt, 0, [&](const State& s) {
    const Configuration pulled = re_matrix(f.alpha, f.beta, -s.t, k) * s.q;
    const double d = (pulled - f.base).colwise().norm().maxCoeff();
    r.max_deviation = std::max(r.max_deviation, d);
    if (within && d < eps_dyn) r.horizon = s.t;
    else within = false;
    if (d > 1e-13 && d < 1e-3) growth.emplace_back(s.t, std::log(d));
  });
  if (growth.size() > 10) {
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (auto [t, l] : growth) {
      st += t;
      sl += l;
      stt += t * t;
      stl += t * l;
    }
    const double nn = double(growth.size());
    r.growth_rate = (nn * stl - st * sl) / (nn * stt - st * st);
  }
  r.energy_drift = tr.energy_drift;
  r.integration_terminated = tr.terminated;
  if (tr.terminated) {
    r.max_deviation = std::numeric_limits<double>::infinity();
    if (r.note.empty()) r.note = "integration stopped: " + tr.termination_reason;
  }
  r.passed = !tr.terminated && !r.precision_lost && r.max_deviation < eps_dyn && r.max_eom_residual < eps_dyn;
  return r;
}

double tau_duality_error(const Configuration& q, double alpha, double beta, const std::vector<double>& times) {
  const Configuration tq = apply_tau(q);
  double e = 0.0;
  for (double t : times) {
    const Configuration lhs = re_matrix(beta, alpha, t, Curvature::Spherical) * tq;
    const Configuration rhs = apply_tau(re_matrix(alpha, beta, t, Curvature::Spherical) * q);
    e = std::max(e, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return e;
}

bool geodesic_velocity_orthogonality(const REFamily& f, double tol) {
  const Curvature k = f.curvature;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f.base, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() >= 3 && sv[2] > 1e-7 * sv[0]) throw DomainError("configuration is not geodesic");
  const Eigen::Matrix4d xi = re_generator(f.alpha, f.beta, k);
  for (Eigen::Index i = 0; i < f.base.cols(); ++i) {
    const AmbientPoint q = f.base.col(i);
    const AmbientPoint v = xi * q;
    if (v.norm() == 0.0) continue;
    // tangent of the geodesic: the part of the spanning plane orthogonal to q
    AmbientPoint best = AmbientPoint::Zero();
    for (int c = 0; c < 2; ++c) {
      const AmbientPoint u = svd.matrixU().col(c);
      const AmbientPoint t = u - (signed_dot(u, q, k) / signed_dot(q, q, k)) * q;
      if (t.norm() > best.norm()) best = t;
    }
    if (std::abs(signed_dot(v, best, k)) > tol * v.norm() * best.norm()) return false;
  }
  return true;
}

PeriodicityLabel periodicity_label(double alpha, double beta, Curvature k, int max_denominator, double accept) {
  PeriodicityLabel out;
  const double two_pi = 2.0 * std::numbers::pi;
  if (alpha == 0.0 && beta == 0.0) {
    out.periodic = true;
    out.label = "equilibrium";
    return out;
  }
  if (beta == 0.0) {
    out = {true, 1, 0, two_pi / std::abs(alpha), "periodic"};
    return out;
  }
  if (k == Curvature::Hyperbolic) {
    out.label = "unbounded";
    return out;
  }
  if (alpha == 0.0) {
    out = {true, 0, 1, two_pi / std::abs(beta), "periodic"};
    return out;
  }
  // continued-fraction convergents of alpha / beta
  const double x = alpha / beta;
  long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    const long h2 = long(a) * h0 + h1, k2 = long(a) * k0 + k1;
    if (k2 > max_denominator) break;
    h1 = h0;
    h0 = h2;
    k1 = k0;
    k0 = k2;
    if (std::abs(x - double(h0) / double(k0)) <= accept * std::max(1.0, std::abs(x))) {
      out = {true, int(h0), int(k0), two_pi * double(k0) / std::abs(beta), "periodic"};
      return out;
    }
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  out.label = "quasi-periodic";
  return out;
}

}  // namespace curvedcc
