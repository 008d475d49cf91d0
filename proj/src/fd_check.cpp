#include "curvedcc/fd_check.hpp"

#include <algorithm>
#include <random>

namespace curvedcc {

namespace {

double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace

FDCheckReport finite_difference_check(Curvature k, int samples, std::uint64_t seed, const Tolerances& tol,
                                      double hess_limit, double min_separation) {
  FDCheckReport rep;
  rep.grad_limit = tol.eps_fd;
  rep.hess_limit = hess_limit;
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(sign(k) + 2)};
  std::mt19937_64 rng(seq);
  const double span = k == Curvature::Spherical ? 1.2 : 1.5;
  std::uniform_real_distribution<double> ang(-span, span), mass(0.5, 2.0);
  std::uniform_int_distribution<int> size(3, 5);
  while (rep.samples < samples) {
    const int n = size(rng);
    Eigen::VectorXd mv(n), a(2 * n);
    for (int i = 0; i < n; ++i) mv[i] = mass(rng);
    for (int i = 0; i < 2 * n; ++i) a[i] = ang(rng);
    if (min_pair_distance(embed_angles<double>(a, k), k) < min_separation) continue;
    if (k == Curvature::Spherical && (a.cwiseAbs().maxCoeff() + tol.h_fd_hess * 2 >= std::numbers::pi / 2)) continue;
    const MassList m(mv);
    const auto d = angle_derivatives<double>(a, m, k, true, tol.d_min);
    Eigen::VectorXd gU(2 * n), gI(2 * n);
    Eigen::MatrixXd hU(2 * n, 2 * n), hI(2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j) {
      Eigen::VectorXd p = a, q = a;
      p[j] += tol.h_fd_grad;
      q[j] -= tol.h_fd_grad;
      gU[j] = (potential_angles(p, m, k) - potential_angles(q, m, k)) / (2 * tol.h_fd_grad);
      gI[j] = (inertia_angles(p, m, k) - inertia_angles(q, m, k)) / (2 * tol.h_fd_grad);
      p = a;
      q = a;
      p[j] += tol.h_fd_hess;
      q[j] -= tol.h_fd_hess;
      const auto dp = angle_derivatives<double>(p, m, k, false, tol.d_min);
      const auto dq = angle_derivatives<double>(q, m, k, false, tol.d_min);
      hU.col(j) = (dp.gradU - dq.gradU) / (2 * tol.h_fd_hess);
      hI.col(j) = (dp.gradI - dq.gradI) / (2 * tol.h_fd_hess);
    }
    rep.max_grad_error = std::max({rep.max_grad_error, rel_error(d.gradU, gU), rel_error(d.gradI, gI)});
    rep.max_hess_error = std::max({rep.max_hess_error, rel_error(d.hessU, hU), rel_error(d.hessI, hI)});
    ++rep.samples;
  }
  return rep;
}

}  // namespace curvedcc
