#pragma once

#include <Eigen/Dense>
#include <string>

#include "curvedcc/geometry.hpp"

namespace curvedcc {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename Scalar>
PairTrig<Scalar> checked_pair(const Point4<Scalar>& a, const Point4<Scalar>& b, Curvature k, int i, int j,
                              double d_min) {
  const PairTrig<Scalar> t = pair_trig(a, b, k);
  const bool collide = t.dist < Scalar(d_min);
  const bool antipodal = k == Curvature::Spherical && std::numbers::pi_v<Scalar> - t.dist < Scalar(d_min);
  if (collide || antipodal)
    throw SingularConfigurationError("particles " + std::to_string(i) + " and " + std::to_string(j) +
                                         (collide ? " collide" : " are antipodal"),
                                     i, j);
  return t;
}

}  // namespace detail

// Cotangent potential  sum_{i<j} m_i m_j cot d_ij  (coth on H^3).
template <typename Scalar>
Scalar potential(const ConfigurationT<Scalar>& q, const MassList& m, Curvature k,
                 double d_min = default_tolerances().d_min) {
  Scalar u(0);
  for (int i = 0; i < q.cols(); ++i)
    for (int j = i + 1; j < q.cols(); ++j) {
      const auto t = detail::checked_pair<Scalar>(q.col(i), q.col(j), k, i, j, d_min);
      u += Scalar(m[i] * m[j]) * t.cos_d / t.sin_d;
    }
  return u;
}

// sum m_i (x_i^2 + y_i^2)
template <typename Scalar>
Scalar moment_of_inertia(const ConfigurationT<Scalar>& q, const MassList& m) {
  Scalar s(0);
  for (int i = 0; i < q.cols(); ++i) s += Scalar(m[i]) * (q(0, i) * q(0, i) + q(1, i) * q(1, i));
  return s;
}

// Value, gradient and (optionally) Hessian of U and I in the packed angle
// coordinates (theta_1..theta_n, phi_1..phi_n).
template <typename Scalar>
struct AngleDerivatives {
  Scalar U{0};
  Scalar I{0};
  VectorX<Scalar> gradU, gradI;
  MatrixX<Scalar> hessU, hessI;
};

// Writing c = cos d (cosh d) as sigma * <q_i, q_j>, the pair term is
// f(c) = c / S with S^2 = sigma (1 - c^2), so f' = sigma / S^3 and f'' = 3 c / S^5.
template <typename Scalar>
AngleDerivatives<Scalar> angle_derivatives(const VectorX<Scalar>& angles, const MassList& m, Curvature k,
                                           bool with_hessian, double d_min = default_tolerances().d_min) {
  const int n = static_cast<int>(angles.size() / 2);
  if (n != m.size()) throw DomainError("angle vector does not match the mass list");
  const Scalar sg = Scalar(sign(k));
  std::vector<ChartJet<Scalar>> jet(n);
  for (int i = 0; i < n; ++i) jet[i] = chart_jet<Scalar>(angles[i], angles[n + i], k);

  AngleDerivatives<Scalar> out;
  out.gradU = VectorX<Scalar>::Zero(2 * n);
  out.gradI = VectorX<Scalar>::Zero(2 * n);
  if (with_hessian) {
    out.hessU = MatrixX<Scalar>::Zero(2 * n, 2 * n);
    out.hessI = MatrixX<Scalar>::Zero(2 * n, 2 * n);
  }
  auto dot = [k](const Point4<Scalar>& a, const Point4<Scalar>& b) { return signed_dot(a, b, k); };

  for (int i = 0; i < n; ++i) {
    const auto& J = jet[i];
    const Scalar mi = Scalar(m[i]);
    const Scalar x = J.q[0], y = J.q[1];
    out.I += mi * (x * x + y * y);
    out.gradI[i] += Scalar(2) * mi * (x * J.dt[0] + y * J.dt[1]);
    out.gradI[n + i] += Scalar(2) * mi * (x * J.dp[0] + y * J.dp[1]);
    if (with_hessian) {
      auto second = [&](const Point4<Scalar>& a, const Point4<Scalar>& b, const Point4<Scalar>& ab) {
        return Scalar(2) * mi * (a[0] * b[0] + x * ab[0] + a[1] * b[1] + y * ab[1]);
      };
      out.hessI(i, i) += second(J.dt, J.dt, J.dtt);
      const Scalar tp = second(J.dt, J.dp, J.dtp);
      out.hessI(i, n + i) += tp;
      out.hessI(n + i, i) += tp;
      out.hessI(n + i, n + i) += second(J.dp, J.dp, J.dpp);
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& A = jet[i];
      const auto& B = jet[j];
      const auto t = detail::checked_pair<Scalar>(A.q, B.q, k, i, j, d_min);
      const Scalar mm = Scalar(m[i] * m[j]);
      const Scalar s3 = t.sin_d * t.sin_d * t.sin_d;
      const Scalar f1 = sg / s3;
      out.U += mm * t.cos_d / t.sin_d;
      // local coordinates (theta_i, phi_i, theta_j, phi_j)
      const int idx[4] = {i, n + i, j, n + j};
      Eigen::Matrix<Scalar, 4, 1> gc;
      gc << sg * dot(A.dt, B.q), sg * dot(A.dp, B.q), sg * dot(A.q, B.dt), sg * dot(A.q, B.dp);
      for (int a = 0; a < 4; ++a) out.gradU[idx[a]] += mm * f1 * gc[a];
      if (!with_hessian) continue;
      const Scalar f2 = Scalar(3) * t.cos_d / (s3 * t.sin_d * t.sin_d);
      Eigen::Matrix<Scalar, 4, 4> cc;
      cc(0, 0) = dot(A.dtt, B.q);
      cc(0, 1) = cc(1, 0) = dot(A.dtp, B.q);
      cc(1, 1) = dot(A.dpp, B.q);
      cc(2, 2) = dot(A.q, B.dtt);
      cc(2, 3) = cc(3, 2) = dot(A.q, B.dtp);
      cc(3, 3) = dot(A.q, B.dpp);
      cc(0, 2) = cc(2, 0) = dot(A.dt, B.dt);
      cc(0, 3) = cc(3, 0) = dot(A.dt, B.dp);
      cc(1, 2) = cc(2, 1) = dot(A.dp, B.dt);
      cc(1, 3) = cc(3, 1) = dot(A.dp, B.dp);
      cc *= sg;
      const Eigen::Matrix<Scalar, 4, 4> local = mm * (f2 * gc * gc.transpose() + f1 * cc);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out.hessU(idx[a], idx[b]) += local(a, b);
    }
  }
  return out;
}

struct PotentialEval {
  double U = 0.0;
  double I = 0.0;
  Eigen::VectorXd gradU;
  Eigen::VectorXd gradI;
};

double potential_angles(const Eigen::VectorXd& angles, const MassList& m, Curvature k);
double inertia_angles(const Eigen::VectorXd& angles, const MassList& m, Curvature k);
PotentialEval grad_angle(const Eigen::VectorXd& angles, const MassList& m, Curvature k);

// Second partials of U - lambda I in the angle chart (2n x 2n, symmetric).
Eigen::MatrixXd hessian_angle(const Eigen::VectorXd& angles, const MassList& m, Curvature k, double lambda);

struct CCResidual {
  double lambda = 0.0;
  double residual_norm = 0.0;
  double scaled_residual = 0.0;  // residual_norm / max(1, |grad U|)
  bool degenerate = false;       // grad I vanishes: multiplier undefined
  Eigen::MatrixXd per_particle;  // one column per particle
  bool is_occ(double eps_cc = default_tolerances().eps_cc) const {
    return !degenerate && scaled_residual < eps_cc;
  }
};

// Least-squares multiplier <gradU, gradI>/<gradI, gradI> in the angle chart;
// per_particle holds the (theta, phi) residual pair of each particle.
CCResidual multiplier_and_residual(const Eigen::VectorXd& angles, const MassList& m, Curvature k);

// Same criterion in ambient coordinates on (S^3)^n or (H^3)^n, using the
// induced metric. Valid for any configuration, including 3-dimensional ones.
CCResidual ambient_multiplier_and_residual(const Configuration& q, const MassList& m, Curvature k,
                                           double d_min = default_tolerances().d_min);

// Riemannian gradient of U at each particle: sum_j m_i m_j (q_j - cos d_ij q_i) / sin^3 d_ij.
Configuration potential_force(const Configuration& q, const MassList& m, Curvature k,
                              double d_min = default_tolerances().d_min);
// Riemannian gradient of I at each particle.
Configuration inertia_gradient(const Configuration& q, const MassList& m, Curvature k);

// (sum m x z, sum m x w, sum m y z, sum m y w); all vanish at an OCC.
Eigen::Vector4d mc_identities(const Configuration& q, const MassList& m);

// Tangent of the xy-rotation orbit, written in angle coordinates.
Eigen::VectorXd rotation_generator_angles(const Eigen::VectorXd& angles, Curvature k);

}  // namespace curvedcc
