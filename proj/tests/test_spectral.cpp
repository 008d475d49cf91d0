#include <doctest.h>

#include "curvedcc/spectral.hpp"
#include "oracles.hpp"

using namespace curvedcc;

namespace {

oracle::Counts reference_inertia(const GeodesicCC& cc, const MassList& m, int s) {
  const Eigen::VectorXd ev = oracle::constrained_spectrum(geodesic_angles(cc.theta), m.values(), s, cc.lambda);
  return oracle::count_signs(ev, 1e-4 * ev.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("matrix_inertia counts signs against the relative band") {
  Eigen::VectorXd d(5);
  d << -3.0, -1e-9, 0.0, 2.0, 5.0;
  const Inertia in = matrix_inertia(Eigen::MatrixXd(d.asDiagonal()));
  CHECK(in.triple == InertiaTriple{2, 2, 1});
  CHECK(in.tol_zero == doctest::Approx(5e-7));
}

TEST_CASE("complement basis is orthonormal and orthogonal to the span") {
  Eigen::MatrixXd c(5, 2);
  c << 1, 0, 2, 1, 0, 3, -1, 1, 4, 0;
  const Eigen::MatrixXd B = complement_basis(c, 5);
  CHECK(B.cols() == 3);
  CHECK((B.transpose() * B - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  CHECK((B.transpose() * c).norm() < 1e-12);
}

TEST_CASE("A matches the reference formula and has the two known eigenvectors") {
  const MassList m{0.8, 1.6, 1.1, 0.7};
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    const double c = s > 0 ? 0.2 * m.min() : 1.0;
    const GeodesicCC cc = solve_ordering(OrderingProblem{m, c, k, {1, 3, 0, 2}});
    const Eigen::MatrixXd A = build_A(cc, m, k);
    CHECK((A - oracle::matrix_A(cc.theta, m.values(), s)).norm() < 1e-10 * A.norm());
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(A).eigenvalues();
    double to_zero = 1e300, to_two_lambda = 1e300;
    for (int i = 0; i < ev.size(); ++i) {
      CHECK(std::abs(ev[i].imag()) < 1e-9 * A.norm());
      to_zero = std::min(to_zero, std::abs(ev[i]));
      to_two_lambda = std::min(to_two_lambda, std::abs(ev[i] - 2 * cc.lambda));
    }
    CHECK(to_zero < 1e-9 * A.norm());
    CHECK(to_two_lambda < 1e-9 * A.norm());

    const SpectralReport r = spectral_ordering_check(cc, m, k);
    CHECK(r.c1_residual < 1e-9);
    CHECK(r.c2_residual < 1e-9);
    CHECK(r.ordering_ok);
    CHECK(r.inertia_A_shift.triple == InertiaTriple{1, 1, 2});
    CHECK(r.H2_identity_error < 1e-9 * std::max(1.0, A.norm()));
    CHECK(r.cross_block_max < 1e-9);
  }
}

TEST_CASE("quotient inertia is (0, n, n-2) and matches the difference reference") {
  const MassList m3{1.0, 1.5, 0.6};
  const MassList m4{0.9, 1.2, 0.7, 1.8};
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    for (const MassList& m : {m3, m4}) {
      const int n = m.size();
      const double c = s > 0 ? 0.2 * m.min() : 1.0;
      const GeodesicEnumeration e = enumerate_geodesic_ccs(m, c, k);
      for (const GeodesicCC& cc : e.classes) {
        const SpectralReport r = spectral_ordering_check(cc, m, k);
        CHECK(r.inertia_total.triple == InertiaTriple{0, n, n - 2});
        CHECK(r.inertia_total.margin >= 10.0);
        const oracle::Counts ref = reference_inertia(cc, m, s);
        CHECK(ref.zero == 0);
        CHECK(ref.plus == n);
        CHECK(ref.minus == n - 2);
        const Inertia q = constrained_quotient_inertia(geodesic_angles(cc.theta), m, k, cc.lambda);
        CHECK(q.triple == r.inertia_total.triple);
      }
    }
  }
}

TEST_CASE("cone inequalities hold at geodesic OCCs") {
  const MassList m{1.2, 0.5, 0.9, 1.4};
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    const double c = s > 0 ? 0.2 * m.min() : 1.0;
    const GeodesicCC cc = solve_ordering(OrderingProblem{m, c, k, {0, 1, 2, 3}});
    const ConeReport r = cone_and_inequality_checks(cc, m, k, 100, 3);
    CHECK(r.ok());
    CHECK(r.triples_checked > 0);
  }
}
