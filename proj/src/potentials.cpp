#include "curvedcc/potentials.hpp"

namespace curvedcc {

double potential_angles(const Eigen::VectorXd& angles, const MassList& m, Curvature k) {
  return potential<double>(embed_angles<double>(angles, k), m, k);
}

double inertia_angles(const Eigen::VectorXd& angles, const MassList& m, Curvature k) {
  return moment_of_inertia<double>(embed_angles<double>(angles, k), m);
}

PotentialEval grad_angle(const Eigen::VectorXd& angles, const MassList& m, Curvature k) {
  auto d = angle_derivatives<double>(angles, m, k, false);
  return {d.U, d.I, std::move(d.gradU), std::move(d.gradI)};
}

Eigen::MatrixXd hessian_angle(const Eigen::VectorXd& angles, const MassList& m, Curvature k, double lambda) {
  const auto d = angle_derivatives<double>(angles, m, k, true);
  Eigen::MatrixXd h = d.hessU - lambda * d.hessI;
  return 0.5 * (h + h.transpose());
}

CCResidual multiplier_and_residual(const Eigen::VectorXd& angles, const MassList& m, Curvature k) {
  const auto d = angle_derivatives<double>(angles, m, k, false);
  const int n = m.size();
  CCResidual r;
  const double gi2 = d.gradI.squaredNorm();
  r.degenerate = gi2 <= 1e-30 * m.total() * m.total();
  r.lambda = r.degenerate ? 0.0 : d.gradU.dot(d.gradI) / gi2;
  const Eigen::VectorXd res = d.gradU - r.lambda * d.gradI;
  r.residual_norm = res.norm();
  r.scaled_residual = r.residual_norm / std::max(1.0, d.gradU.norm());
  r.per_particle.resize(2, n);
  r.per_particle.row(0) = res.head(n).transpose();
  r.per_particle.row(1) = res.tail(n).transpose();
  return r;
}

Configuration potential_force(const Configuration& q, const MassList& m, Curvature k, double d_min) {
  const int n = static_cast<int>(q.cols());
  Configuration f = Configuration::Zero(4, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto t = detail::checked_pair<double>(q.col(i), q.col(j), k, i, j, d_min);
      const double w = m[i] * m[j] / (t.sin_d * t.sin_d * t.sin_d);
      f.col(i) += w * (q.col(j) - t.cos_d * q.col(i));
      f.col(j) += w * (q.col(i) - t.cos_d * q.col(j));
    }
  return f;
}

Configuration inertia_gradient(const Configuration& q, const MassList& m, Curvature k) {
  Configuration g = Configuration::Zero(4, q.cols());
  for (int i = 0; i < q.cols(); ++i) {
    const double r2 = q(0, i) * q(0, i) + q(1, i) * q(1, i);
    AmbientPoint v(q(0, i), q(1, i), 0.0, 0.0);
    g.col(i) = 2.0 * m[i] * (v - sign(k) * r2 * q.col(i));
  }
  return g;
}

CCResidual ambient_multiplier_and_residual(const Configuration& q, const MassList& m, Curvature k, double d_min) {
  const Configuration f = potential_force(q, m, k, d_min);
  const Configuration g = inertia_gradient(q, m, k);
  auto metric = [k](const AmbientPoint& a, const AmbientPoint& b) { return signed_dot(a, b, k); };
  double fg = 0.0, gg = 0.0, ff = 0.0;
  for (int i = 0; i < q.cols(); ++i) {
    fg += metric(f.col(i), g.col(i));
    gg += metric(g.col(i), g.col(i));
    ff += metric(f.col(i), f.col(i));
  }
  CCResidual r;
  r.degenerate = gg <= 1e-30 * m.total() * m.total();
  r.lambda = r.degenerate ? 0.0 : fg / gg;
  r.per_particle = f - r.lambda * g;
  double rr = 0.0;
  for (int i = 0; i < q.cols(); ++i) {
    const AmbientPoint ri = r.per_particle.col(i);
    rr += std::max(0.0, metric(ri, ri));
  }
  r.residual_norm = std::sqrt(rr);
  r.scaled_residual = r.residual_norm / std::max(1.0, std::sqrt(std::max(0.0, ff)));
  return r;
}

Eigen::Vector4d mc_identities(const Configuration& q, const MassList& m) {
  Eigen::Vector4d s = Eigen::Vector4d::Zero();
  for (int i = 0; i < q.cols(); ++i) {
    s[0] += m[i] * q(0, i) * q(2, i);
    s[1] += m[i] * q(0, i) * q(3, i);
    s[2] += m[i] * q(1, i) * q(2, i);
    s[3] += m[i] * q(1, i) * q(3, i);
  }
  return s;
}

Eigen::VectorXd rotation_generator_angles(const Eigen::VectorXd& angles, Curvature k) {
  const Eigen::Index n = angles.size() / 2;
  Eigen::VectorXd r(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = angles[i], p = angles[n + i];
    // d/de of (x, y) under rotation is (-y, x); pull back through the chart.
    if (k == Curvature::Hyperbolic) {
      const double x = std::sinh(t), y = std::cosh(t) * std::sinh(p);
      const double td = -y / std::cosh(t);
      r[i] = td;
      r[n + i] = (x - std::sinh(t) * std::sinh(p) * td) / (std::cosh(t) * std::cosh(p));
    } else {
      const double x = std::sin(t), y = std::cos(t) * std::sin(p);
      const double td = -y / std::cos(t);
      r[i] = td;
      r[n + i] = (x + std::sin(t) * std::sin(p) * td) / (std::cos(t) * std::cos(p));
    }
  }
  return r;
}

}  // namespace curvedcc
