#pragma once

// Reference computations for the tests. Nothing here calls the analytic
// derivative code: points come from a separate chart, the potential from
// acos/atan of raw inner products, derivatives from Richardson-extrapolated
// differences.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Eigen::Vector4d point(double t, double p, int sigma) {
  if (sigma > 0) return {std::sin(t), std::cos(t) * std::sin(p), std::cos(t) * std::cos(p), 0.0};
  return {std::sinh(t), std::cosh(t) * std::sinh(p), 0.0, std::cosh(t) * std::cosh(p)};
}

inline double inner(const Eigen::Vector4d& a, const Eigen::Vector4d& b, int sigma) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + sigma * a[3] * b[3];
}

// cot d (coth d) from the chord, which keeps full precision for close pairs
// (and for nearly antipodal pairs on the sphere).
inline double pair_term(const Eigen::Vector4d& a, const Eigen::Vector4d& b, int sigma) {
  if (sigma < 0) {
    const Eigen::Vector4d d = a - b;
    const double h = 0.5 * std::sqrt(std::max(0.0, inner(d, d, -1)));  // sinh(d/2)
    return (1 + 2 * h * h) / (2 * h * std::sqrt(1 + h * h));
  }
  if (a.dot(b) >= 0) {
    const double h = 0.5 * (a - b).norm();  // sin(d/2)
    return (1 - 2 * h * h) / (2 * h * std::sqrt(1 - h * h));
  }
  const double h = 0.5 * (a + b).norm();  // cos(d/2)
  return (2 * h * h - 1) / (2 * h * std::sqrt(1 - h * h));
}

// angles packed (theta_1..theta_n, phi_1..phi_n)
inline double U(const Vec& a, const Vec& m, int sigma) {
  const int n = static_cast<int>(m.size());
  double u = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) u += m[i] * m[j] * pair_term(point(a[i], a[n + i], sigma), point(a[j], a[n + j], sigma), sigma);
  return u;
}

inline double I(const Vec& a, const Vec& m, int sigma) {
  const int n = static_cast<int>(m.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector4d q = point(a[i], a[n + i], sigma);
    s += m[i] * (q[0] * q[0] + q[1] * q[1]);
  }
  return s;
}

// Richardson on central differences, O(h^4)
inline Vec gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-3) {
  Vec g(x.size());
  auto central = [&](int j, double s) {
    Vec p = x, q = x;
    p[j] += s;
    q[j] -= s;
    return (f(p) - f(q)) / (2 * s);
  };
  for (int j = 0; j < x.size(); ++j) g[j] = (4 * central(j, h / 2) - central(j, h)) / 3;
  return g;
}

inline Mat hessian(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-3) {
  const int d = static_cast<int>(x.size());
  Mat H(d, d);
  auto second = [&](int j, int k, double s) {
    auto at = [&](double sj, double sk) {
      Vec p = x;
      p[j] += sj;
      p[k] += sk;
      return f(p);
    };
    if (j == k) return (at(s, 0) - 2 * f(x) + at(-s, 0)) / (s * s);
    return (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4 * s * s);
  };
  for (int j = 0; j < d; ++j)
    for (int k = j; k < d; ++k) H(j, k) = H(k, j) = (4 * second(j, k, h / 2) - second(j, k, h)) / 3;
  return H;
}

inline Vec jacobian_column(const std::function<Vec(const Vec&)>& f, const Vec& x, int j, double h = 1e-3) {
  auto central = [&](double s) {
    Vec p = x, q = x;
    p[j] += s;
    q[j] -= s;
    return Vec((f(p) - f(q)) / (2 * s));
  };
  return (4 * central(h / 2) - central(h)) / 3;
}

struct Multiplier {
  double lambda = 0.0;
  double residual = 0.0;  // |gU - lambda gI| / max(1, |gU|)
};

inline Multiplier multiplier(const Vec& a, const Vec& m, int sigma, double h = 1e-3) {
  const Vec gU = gradient([&](const Vec& x) { return U(x, m, sigma); }, a, h);
  const Vec gI = gradient([&](const Vec& x) { return I(x, m, sigma); }, a, h);
  Multiplier r;
  r.lambda = gU.dot(gI) / gI.squaredNorm();
  r.residual = (gU - r.lambda * gI).norm() / std::max(1.0, gU.norm());
  return r;
}

// Multiplier on S^3 for arbitrary (3-dimensional) configurations. U and I are
// extended off the sphere as functions of q/|q|, so the Euclidean gradient is
// tangent already.
inline Multiplier sphere_multiplier(const Eigen::Matrix<double, 4, Eigen::Dynamic>& q, const Vec& m) {
  const int n = static_cast<int>(q.cols());
  auto unpack = [n](const Vec& x, int i) { return Eigen::Vector4d(x.segment<4>(4 * i).normalized()); };
  auto u = [&](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += m[i] * m[j] * pair_term(unpack(x, i), unpack(x, j), 1);
    return s;
  };
  auto in = [&](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector4d p = unpack(x, i);
      s += m[i] * (p[0] * p[0] + p[1] * p[1]);
    }
    return s;
  };
  Vec x(4 * n);
  for (int i = 0; i < n; ++i) x.segment<4>(4 * i) = q.col(i);
  const Vec gU = gradient(u, x, 1e-4), gI = gradient(in, x, 1e-4);
  Multiplier r;
  r.lambda = gU.dot(gI) / gI.squaredNorm();
  r.residual = (gU - r.lambda * gI).norm() / std::max(1.0, gU.norm());
  return r;
}

// A_ij = m_j / S_ij^3, A_ii = -sum_j m_j C_j / (C_i S_ij^3) for a geodesic configuration
inline Mat matrix_A(const Vec& theta, const Vec& m, int sigma) {
  const int n = static_cast<int>(theta.size());
  Mat A = Mat::Zero(n, n);
  auto C = [sigma](double t) { return sigma > 0 ? std::cos(t) : std::cosh(t); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = std::abs(theta[i] - theta[j]);
      const double s3 = std::pow(sigma > 0 ? std::sin(d) : std::sinh(d), 3);
      A(i, j) = m[j] / s3;
      A(i, i) -= m[j] * C(theta[j]) / (C(theta[i]) * s3);
    }
  return A;
}

// Tangent of the xy rotation in angle coordinates, by differencing rotated
// ambient points through the inverse chart.
inline Vec rotation_tangent(const Vec& a, int sigma) {
  const int n = static_cast<int>(a.size() / 2);
  auto rotated = [&](double e) {
    Vec out(2 * n);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector4d q = point(a[i], a[n + i], sigma);
      const double x = std::cos(e) * q[0] - std::sin(e) * q[1], y = std::sin(e) * q[0] + std::cos(e) * q[1];
      out[i] = sigma > 0 ? std::asin(x) : std::asinh(x);
      out[n + i] = sigma > 0 ? std::atan2(y, q[2]) : std::atanh(y / q[3]);
    }
    return out;
  };
  const double h = 1e-5;
  return (rotated(h) - rotated(-h)) / (2 * h);
}

// Eigenvalues of the difference Hessian of U - lambda I on the complement of
// grad I and the rotation tangent.
inline Vec constrained_spectrum(const Vec& a, const Vec& m, int sigma, double lambda) {
  const auto f = [&](const Vec& x) { return U(x, m, sigma) - lambda * I(x, m, sigma); };
  const Mat H = hessian(f, a);
  Mat cols(a.size(), 2);
  cols.col(0) = gradient([&](const Vec& x) { return I(x, m, sigma); }, a);
  cols.col(1) = rotation_tangent(a, sigma);
  const Eigen::HouseholderQR<Mat> qr(cols);
  const Mat Q = qr.householderQ();
  const Mat B = Q.rightCols(a.size() - 2);
  const Mat R = B.transpose() * H * B;
  return Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (R + R.transpose())).eigenvalues();
}

struct Counts {
  int zero = 0, plus = 0, minus = 0;
};

inline Counts count_signs(const Vec& ev, double tol) {
  Counts c;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= tol) ++c.zero;
    else if (ev[i] > 0) ++c.plus;
    else ++c.minus;
  }
  return c;
}

}  // namespace oracle
