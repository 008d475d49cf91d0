#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "curvedcc/errors.hpp"
#include "curvedcc/tolerances.hpp"

namespace curvedcc {

// Selects S^3 (+1) or H^3 (-1); every trigonometric branch keys off this.
enum class Curvature : int { Spherical = 1, Hyperbolic = -1 };

constexpr int sign(Curvature k) { return static_cast<int>(k); }
inline Curvature curvature_from_sign(int s) {
  if (s != 1 && s != -1) throw ConfigError("sigma must be +1 or -1, got " + std::to_string(s));
  return s > 0 ? Curvature::Spherical : Curvature::Hyperbolic;
}

template <typename Scalar>
using Point4 = Eigen::Matrix<Scalar, 4, 1>;
using AmbientPoint = Point4<double>;

// n points stored column-wise as ambient (x, y, z, w).
template <typename Scalar>
using ConfigurationT = Eigen::Matrix<Scalar, 4, Eigen::Dynamic>;
using Configuration = ConfigurationT<double>;

// Angle coordinates of one particle on H^2_{xyw} or on the cap z > 0 of S^2_{xyz}.
struct AnglePoint {
  double theta = 0.0;
  double phi = 0.0;
};

// Positive masses, n >= 2.
class MassList {
 public:
  MassList() = default;
  explicit MassList(Eigen::VectorXd m) : m_(std::move(m)) { validate(); }
  MassList(std::initializer_list<double> m) : m_(static_cast<Eigen::Index>(m.size())) {
    Eigen::Index i = 0;
    for (double v : m) m_[i++] = v;
    validate();
  }
  static MassList from_vector(const std::vector<double>& v) {
    return MassList(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }

  int size() const { return static_cast<int>(m_.size()); }
  double operator[](int i) const { return m_[i]; }
  const Eigen::VectorXd& values() const { return m_; }
  double min() const { return m_.minCoeff(); }
  double total() const { return m_.sum(); }
  MassList scaled(double k) const { return MassList(Eigen::VectorXd(m_ * k)); }

 private:
  void validate() const {
    if (m_.size() < 2) throw ConfigError("need at least two masses");
    for (Eigen::Index i = 0; i < m_.size(); ++i)
      if (!(m_[i] > 0.0)) throw ConfigError("mass " + std::to_string(i) + " is not positive");
  }
  Eigen::VectorXd m_;
};

// Element of SO(2) x SO(2) (sigma=+1) or SO(2) x SO+(1,1) (sigma=-1), optionally
// preceded by the swap tau(x,y,z,w) = (z,w,x,y) on S^3:
//   q -> (R(angle1) (+) G(param2)) tau^{tau_flag} q
struct SymmetryElement {
  double angle1 = 0.0;
  double param2 = 0.0;
  bool tau_flag = false;
};

template <typename Scalar>
Scalar signed_dot(const Point4<Scalar>& a, const Point4<Scalar>& b, Curvature k) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + Scalar(sign(k)) * a[3] * b[3];
}

// cos/sin (cosh/sinh) of the geodesic distance between two points. The sine
// factor goes through a chord formula whenever the points are close (or, on
// S^3, nearly antipodal) so that it keeps full relative precision.
template <typename Scalar>
struct PairTrig {
  Scalar cos_d;  // cos d or cosh d, i.e. sigma * (a . b)
  Scalar sin_d;  // sin d or sinh d, >= 0
  Scalar dist;
};

template <typename Scalar>
PairTrig<Scalar> pair_trig(const Point4<Scalar>& a, const Point4<Scalar>& b, Curvature k) {
  using std::acos;
  using std::acosh;
  using std::asin;
  using std::asinh;
  using std::sqrt;
  const Scalar c = Scalar(sign(k)) * signed_dot(a, b, k);
  PairTrig<Scalar> out{c, Scalar(0), Scalar(0)};
  if (k == Curvature::Spherical) {
    if (c > Scalar(0.5)) {
      const Scalar h = (a - b).norm() / Scalar(2);  // sin(d/2)
      out.dist = Scalar(2) * asin(h < Scalar(1) ? h : Scalar(1));
      out.sin_d = Scalar(2) * h * sqrt(Scalar(1) - h * h);
    } else if (c < Scalar(-0.5)) {
      const Scalar h = (a + b).norm() / Scalar(2);  // cos(d/2)
      out.dist = std::numbers::pi_v<Scalar> - Scalar(2) * asin(h < Scalar(1) ? h : Scalar(1));
      out.sin_d = Scalar(2) * h * sqrt(Scalar(1) - h * h);
    } else {
      out.dist = acos(c);
      out.sin_d = sqrt(Scalar(1) - c * c);
    }
  } else {
    if (c > Scalar(1.5)) {
      out.dist = acosh(c);
      out.sin_d = sqrt((c - Scalar(1)) * (c + Scalar(1)));
    } else {
      const Point4<Scalar> d = a - b;
      const Scalar m2 = signed_dot(d, d, k);
      const Scalar h = sqrt(m2 > Scalar(0) ? m2 : Scalar(0)) / Scalar(2);  // sinh(d/2)
      out.dist = Scalar(2) * asinh(h);
      out.sin_d = Scalar(2) * h * sqrt(Scalar(1) + h * h);
    }
  }
  return out;
}

// Geodesic distance. Throws DomainError when the inner product is out of range
// by more than eps (roundoff inside eps is clamped).
template <typename Scalar>
Scalar distance(const Point4<Scalar>& a, const Point4<Scalar>& b, Curvature k,
                double eps = default_tolerances().eps_mfld) {
  using std::abs;
  const Scalar c = Scalar(sign(k)) * signed_dot(a, b, k);
  if (k == Curvature::Spherical && abs(c) > Scalar(1) + Scalar(eps))
    throw DomainError("spherical inner product outside [-1, 1]");
  if (k == Curvature::Hyperbolic && c < Scalar(1) - Scalar(eps))
    throw DomainError("hyperbolic inner product above -1");
  return pair_trig(a, b, k).dist;
}

// |theta_i - theta_j| along H^1_{xw} or S^1_{xz}.
inline double geodesic_distance_1d(double theta_i, double theta_j, Curvature k) {
  const double d = std::abs(theta_i - theta_j);
  if (k == Curvature::Spherical && d >= std::numbers::pi)
    throw DomainError("geodesic chart separation must stay below pi");
  return d;
}

inline bool on_manifold(const AmbientPoint& q, Curvature k, double eps = default_tolerances().eps_mfld) {
  if (std::abs(signed_dot(q, q, k) - sign(k)) >= eps) return false;
  return k == Curvature::Spherical || q[3] >= 1.0 - eps;
}

// Throws ManifoldError naming the first offending particle.
void validate_configuration(const Configuration& q, Curvature k, double eps = default_tolerances().eps_mfld);

// Rescales each column back onto S^3 / the upper sheet of H^3.
Configuration project_to_manifold(const Configuration& q, Curvature k);

// Angle chart: (sinh t, cosh t sinh p, 0, cosh t cosh p) on H^2_{xyw},
// (sin t, cos t sin p, cos t cos p, 0) on the cap z > 0 of S^2_{xyz}.
template <typename Scalar>
Point4<Scalar> angles_to_point(Scalar theta, Scalar phi, Curvature k) {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  if (k == Curvature::Spherical) {
    const Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);
    if (!(abs(theta) < half_pi && abs(phi) < half_pi))
      throw ChartError("spherical angle chart requires |theta|, |phi| < pi/2");
    return {sin(theta), cos(theta) * sin(phi), cos(theta) * cos(phi), Scalar(0)};
  }
  return {sinh(theta), cosh(theta) * sinh(phi), Scalar(0), cosh(theta) * cosh(phi)};
}

inline AmbientPoint angles_to_point(const AnglePoint& p, Curvature k) {
  return angles_to_point<double>(p.theta, p.phi, k);
}

// Inverse chart. Requires z = 0 (hyperbolic) or w = 0, z > 0 (spherical).
AnglePoint point_to_angles(const AmbientPoint& q, Curvature k);

// Point together with its first and second partials in (theta, phi).
template <typename Scalar>
struct ChartJet {
  Point4<Scalar> q, dt, dp, dtt, dtp, dpp;
};

template <typename Scalar>
ChartJet<Scalar> chart_jet(Scalar theta, Scalar phi, Curvature k) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  ChartJet<Scalar> j;
  const Scalar z = Scalar(0);
  if (k == Curvature::Spherical) {
    const Scalar st = sin(theta), ct = cos(theta), sp = sin(phi), cp = cos(phi);
    j.q = {st, ct * sp, ct * cp, z};
    j.dt = {ct, -st * sp, -st * cp, z};
    j.dp = {z, ct * cp, -ct * sp, z};
    j.dtt = -j.q;
    j.dtp = {z, -st * cp, st * sp, z};
    j.dpp = {z, -ct * sp, -ct * cp, z};
  } else {
    const Scalar st = sinh(theta), ct = cosh(theta), sp = sinh(phi), cp = cosh(phi);
    j.q = {st, ct * sp, z, ct * cp};
    j.dt = {ct, st * sp, z, st * cp};
    j.dp = {z, ct * cp, z, ct * sp};
    j.dtt = j.q;
    j.dtp = {z, st * cp, z, st * sp};
    j.dpp = {z, ct * sp, z, ct * cp};
  }
  return j;
}

// Angle configurations are packed as (theta_1..theta_n, phi_1..phi_n).
template <typename Scalar>
ConfigurationT<Scalar> embed_angles(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& angles, Curvature k) {
  const Eigen::Index n = angles.size() / 2;
  ConfigurationT<Scalar> q(4, n);
  for (Eigen::Index i = 0; i < n; ++i) q.col(i) = angles_to_point<Scalar>(angles[i], angles[n + i], k);
  return q;
}

Eigen::VectorXd configuration_to_angles(const Configuration& q, Curvature k);

// Geodesic configuration theta -> (theta, 0) angles.
inline Eigen::VectorXd geodesic_angles(const Eigen::VectorXd& theta) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(2 * theta.size());
  a.head(theta.size()) = theta;
  return a;
}

// 4x4 matrix of the group element acting on ambient coordinates.
Eigen::Matrix4d symmetry_matrix(const SymmetryElement& g, Curvature k);
Configuration apply_symmetry(const SymmetryElement& g, const Configuration& q, Curvature k);
// g o h
SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h, Curvature k);
// (x,y,z,w) -> (z,w,x,y)
Configuration apply_tau(const Configuration& q);
// y -> -y, i.e. phi -> -phi in the angle charts.
Configuration reflect_y(const Configuration& q);

double max_pointwise_distance(const Configuration& a, const Configuration& b, Curvature k);
double min_pair_distance(const Configuration& q, Curvature k);

// On H^3, the boost in the zw-plane that makes sum m_i z_i w_i = 0.
Configuration boost_normalize(const Configuration& q, const MassList& m);

struct ClassGapOptions {
  bool include_reflection = false;  // also allow y -> -y
  int grid = 360;                   // coarse sweep resolution per angle
};

// Quotient distance: inf over the symmetry group of the max pointwise ambient
// distance. 0 iff qA and qB lie in one class (up to eps_class).
double class_gap(const Configuration& qa, const Configuration& qb, const MassList& m, Curvature k,
                 const ClassGapOptions& opt = {});

}  // namespace curvedcc
