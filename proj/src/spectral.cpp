#include "curvedcc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "curvedcc/potentials.hpp"

namespace curvedcc {

namespace {

struct Trig1 {
  double s, c;
};

Trig1 trig(double x, Curvature k) {
  if (k == Curvature::Hyperbolic) return {std::sinh(x), std::cosh(x)};
  return {std::sin(x), std::cos(x)};
}

Eigen::VectorXd geodesic_angles_of(const GeodesicCC& cc) {
  const Eigen::Index n = cc.theta.size();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(2 * n);
  a.head(n) = cc.theta;
  return a;
}

Eigen::MatrixXd restrict_form(const Eigen::MatrixXd& h, const Eigen::MatrixXd& basis) {
  Eigen::MatrixXd r = basis.transpose() * h * basis;
  return 0.5 * (r + r.transpose());
}

}  // namespace

Inertia matrix_inertia(const Eigen::MatrixXd& sym, double tol_zero_rel) {
  if (sym.rows() != sym.cols()) throw DomainError("inertia needs a square matrix");
  Inertia out;
  if (sym.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("symmetric eigen-solver failed");
  out.eigenvalues = es.eigenvalues();
  const double radius = out.eigenvalues.cwiseAbs().maxCoeff();
  out.tol_zero = tol_zero_rel * radius;
  out.margin = std::numeric_limits<double>::infinity();
  for (double mu : out.eigenvalues) {
    if (std::abs(mu) <= out.tol_zero) {
      ++out.triple.n0;
      out.margin = std::min(out.margin, out.tol_zero / std::max(std::abs(mu), 1e-300));
    } else {
      ++(mu > 0 ? out.triple.n_plus : out.triple.n_minus);
      out.margin = std::min(out.margin, std::abs(mu) / out.tol_zero);
    }
  }
  return out;
}

Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& cols, int dim) {
  if (cols.cols() == 0) return Eigen::MatrixXd::Identity(dim, dim);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cols);
  const int r = int(qr.rank());
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  return Q.rightCols(dim - r);
}

Inertia constrained_quotient_inertia(const Eigen::VectorXd& angles, const MassList& m, Curvature k, double lambda,
                                     double tol_zero_rel) {
  const Eigen::Index n2 = angles.size();
  const auto d = angle_derivatives<double>(angles, m, k, true);
  Eigen::MatrixXd span(n2, 2);
  span.col(0) = d.gradI;
  span.col(1) = rotation_generator_angles(angles, k);
  const Eigen::MatrixXd Z = complement_basis(span, int(n2));
  return matrix_inertia(restrict_form(d.hessU - lambda * d.hessI, Z), tol_zero_rel);
}

HessianBlocks build_blocks(const GeodesicCC& cc, const MassList& m, Curvature k) {
  const int n = m.size();
  const Eigen::VectorXd a = geodesic_angles_of(cc);
  const auto d = angle_derivatives<double>(a, m, k, true);
  HessianBlocks b;
  b.full = d.hessU - cc.lambda * d.hessI;
  b.full = 0.5 * (b.full + b.full.transpose());
  b.H1 = b.full.topLeftCorner(n, n);
  b.H2 = b.full.bottomRightCorner(n, n);
  b.cross_block_max = b.full.topRightCorner(n, n).cwiseAbs().maxCoeff();
  b.H1_restricted = restrict_form(b.H1, complement_basis(d.gradI.head(n), n));
  b.rotation_phi = rotation_generator_angles(a, k).tail(n);
  b.H2_quotient = restrict_form(b.H2, complement_basis(b.rotation_phi, n));
  return b;
}

Eigen::MatrixXd build_A(const GeodesicCC& cc, const MassList& m, Curvature k) {
  const int n = m.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double s = trig(std::abs(cc.theta[j] - cc.theta[i]), k).s;
      const double s3 = s * s * s;
      A(i, j) = m[j] / s3;
      A(i, i) -= m[j] * trig(cc.theta[j], k).c / (trig(cc.theta[i], k).c * s3);
    }
  return A;
}

SpectralReport spectral_ordering_check(const GeodesicCC& cc, const MassList& m, Curvature k, const Tolerances& tol) {
  const int n = m.size();
  SpectralReport r;
  r.two_lambda = 2.0 * cc.lambda;
  const HessianBlocks b = build_blocks(cc, m, k);
  const Eigen::MatrixXd A = build_A(cc, m, k);

  Eigen::VectorXd C(n), S(n);
  for (int i = 0; i < n; ++i) {
    const Trig1 t = trig(cc.theta[i], k);
    C[i] = t.c;
    S[i] = t.s;
  }
  const Eigen::VectorXd mv = m.values();
  r.c1_residual = (A * C).norm() / C.norm();
  r.c2_residual = S.norm() > 0 ? (A * S - r.two_lambda * S).norm() / S.norm() : 0.0;
  r.c1c2_M = (mv.array() * C.array() * S.array()).sum();

  const Eigen::VectorXd CM = C.cwiseProduct(mv);
  const Eigen::MatrixXd CMAC = CM.asDiagonal() * A * C.asDiagonal();
  r.CMAC_row_sum_max = CMAC.rowwise().sum().cwiseAbs().maxCoeff();
  const Eigen::MatrixXd rebuilt =
      CM.asDiagonal() * (A - r.two_lambda * Eigen::MatrixXd::Identity(n, n)) * C.asDiagonal();
  r.H2_identity_error = (b.H2 - rebuilt).cwiseAbs().maxCoeff();
  r.cross_block_max = b.cross_block_max;

  // M^{1/2} A M^{-1/2} is symmetric
  const Eigen::VectorXd sq = mv.array().sqrt();
  Eigen::MatrixXd Sym = sq.asDiagonal() * A * sq.cwiseInverse().asDiagonal();
  Sym = 0.5 * (Sym + Sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sym);
  if (es.info() != Eigen::Success) throw SolverError("eigen-solver failed on the matrix A");
  r.eigs_A = es.eigenvalues().reverse();
  const Eigen::MatrixXd U = sq.cwiseInverse().asDiagonal() * es.eigenvectors();
  r.M_orthogonality_error = (U.transpose() * mv.asDiagonal() * U - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  const double radius = r.eigs_A.cwiseAbs().maxCoeff();
  const double tz = tol.tol_zero_rel * radius;
  r.mu1 = r.eigs_A[0];
  r.mu2 = n > 1 ? r.eigs_A[1] : 0.0;
  r.mu3 = n > 2 ? r.eigs_A[2] : -std::numeric_limits<double>::infinity();
  r.ordering_ok = std::abs(r.mu1) <= tz && std::abs(r.mu2 - r.two_lambda) <= tz && r.mu3 < r.two_lambda - tol.gap_min;
  r.degenerate = n > 2 && std::abs(r.mu3 - r.two_lambda) <= tz;

  r.inertia_H1 = matrix_inertia(b.H1_restricted, tol.tol_zero_rel);
  r.H1_min_eig = r.inertia_H1.eigenvalues.size() ? r.inertia_H1.eigenvalues.minCoeff() : 0.0;
  r.inertia_H2 = matrix_inertia(b.H2, tol.tol_zero_rel);
  r.inertia_H2_quotient = matrix_inertia(b.H2_quotient, tol.tol_zero_rel);
  r.inertia_A_shift = matrix_inertia(Sym - r.two_lambda * Eigen::MatrixXd::Identity(n, n), tol.tol_zero_rel);
  r.inertia_total = constrained_quotient_inertia(geodesic_angles_of(cc), m, k, cc.lambda, tol.tol_zero_rel);
  r.orbit_direction_note = k == Curvature::Hyperbolic
                               ? "rotation orbit tangent in phi is (tanh theta_i), the kernel of H2"
                               : "rotation orbit tangent in phi is (tan theta_i), the kernel of H2";
  return r;
}

ConeReport cone_and_inequality_checks(const GeodesicCC& cc, const MassList& m, Curvature k, int boundary_samples,
                                      unsigned seed) {
  const int n = m.size();
  ConeReport rep;
  std::vector<int> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return cc.theta[a] < cc.theta[b]; });
  Eigen::VectorXd th(n), C(n), mp(n);
  for (int p = 0; p < n; ++p) {
    th[p] = cc.theta[ord[p]];
    C[p] = trig(th[p], k).c;
    mp[p] = m[ord[p]];
  }

  rep.tangent_ratios_monotone = true;
  for (int p = 0; p + 1 < n; ++p)
    if (!(trig(th[p], k).s / C[p] < trig(th[p + 1], k).s / C[p + 1])) rep.tangent_ratios_monotone = false;
  if (!rep.tangent_ratios_monotone) rep.failures.push_back("tangent ratios are not increasing");

  auto s3 = [&](double x) {
    const double s = trig(x, k).s;
    return s * s * s;
  };
  rep.min_triple_value = std::numeric_limits<double>::infinity();
  auto record = [&](double v, const std::string& what) {
    ++rep.triples_checked;
    rep.min_triple_value = std::min(rep.min_triple_value, v);
    if (!(v > 0.0)) {
      ++rep.triples_failed;
      rep.failures.push_back(what);
    }
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        // (k, i, j) = (a, b, c), then (i, j, k) = (a, b, c)
        record(s3(th[c] - th[a]) * C[c] - s3(th[b] - th[a]) * C[b],
               "first family fails at positions " + std::to_string(a) + "<" + std::to_string(b) + "<" +
                   std::to_string(c));
        record(s3(th[c] - th[a]) * C[a] - s3(th[c] - th[b]) * C[b],
               "second family fails at positions " + std::to_string(a) + "<" + std::to_string(b) + "<" +
                   std::to_string(c));
      }
  if (rep.triples_checked == 0) rep.min_triple_value = 0.0;

  // A in ordered positions
  GeodesicCC sorted = cc;
  sorted.theta = th;
  const Eigen::MatrixXd A = build_A(sorted, MassList(mp), k);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  rep.min_LYg = std::numeric_limits<double>::infinity();
  if (n < 3) boundary_samples = 0;  // K is a ray for n = 2
  for (int s = 0; s < boundary_samples; ++s) {
    const int i = s % (n - 1);  // active equality between positions i and i+1
    Eigen::VectorXd ratio(n);
    for (int p = 0; p < n; ++p) ratio[p] = unif(rng);
    std::sort(ratio.data(), ratio.data() + n);
    ratio[i + 1] = ratio[i];
    if (ratio[n - 1] - ratio[0] < 1e-3) continue;
    // shift along c1 so the point lies in c1-perp; ratios keep their order
    const double shift = (mp.array() * C.array() * C.array() * ratio.array()).sum() /
                         (mp.array() * C.array() * C.array()).sum();
    const Eigen::VectorXd u = ((ratio.array() - shift) * C.array()).matrix();
    const Eigen::VectorXd du = A * u;
    const double lyg = du[i + 1] / C[i + 1] - du[i] / C[i];
    ++rep.boundary_samples;
    rep.min_LYg = std::min(rep.min_LYg, lyg);
    if (!(lyg > 0.0)) {
      ++rep.boundary_failed;
      rep.failures.push_back("inward flow fails on the boundary facet " + std::to_string(i));
    }
  }
  if (rep.boundary_samples == 0) rep.min_LYg = 0.0;
  return rep;
}

}  // namespace curvedcc
