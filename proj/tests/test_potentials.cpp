#include <doctest.h>

#include <random>

#include "curvedcc/geodesic.hpp"
#include "curvedcc/potentials.hpp"
#include "oracles.hpp"

using namespace curvedcc;

namespace {

// Random angles with every pair at least 0.2 apart.
Eigen::VectorXd random_angles(int n, int s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (;;) {
    Eigen::VectorXd a(2 * n);
    for (int i = 0; i < 2 * n; ++i) a[i] = u(rng);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) {
        const double c = s * oracle::inner(oracle::point(a[i], a[n + i], s), oracle::point(a[j], a[n + j], s), s);
        const double d = s > 0 ? std::acos(std::clamp(c, -1.0, 1.0)) : std::acosh(std::max(c, 1.0));
        ok = d > 0.2 && (s < 0 || d < std::numbers::pi - 0.2);
      }
    if (ok) return a;
  }
}

double rel_inf(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("U and I match the brute-force reference") {
  std::mt19937_64 rng(21);
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 3 + trial % 3;
      const MassList m = MassList(Eigen::VectorXd::LinSpaced(n, 0.5, 2.0));
      const Eigen::VectorXd a = random_angles(n, s, rng);
      CHECK(potential_angles(a, m, k) == doctest::Approx(oracle::U(a, m.values(), s)).epsilon(1e-11));
      CHECK(inertia_angles(a, m, k) == doctest::Approx(oracle::I(a, m.values(), s)).epsilon(1e-13));
    }
  }
}

TEST_CASE("analytic gradients and Hessians match Richardson differences") {
  std::mt19937_64 rng(22);
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + trial % 3;
      const MassList m = MassList(Eigen::VectorXd::LinSpaced(n, 2.0, 0.6));
      const Eigen::VectorXd a = random_angles(n, s, rng);
      const auto u = [&](const Eigen::VectorXd& x) { return oracle::U(x, m.values(), s); };
      const auto in = [&](const Eigen::VectorXd& x) { return oracle::I(x, m.values(), s); };
      const PotentialEval e = grad_angle(a, m, k);
      CHECK(rel_inf(e.gradU, oracle::gradient(u, a)) < 1e-8);
      CHECK(rel_inf(e.gradI, oracle::gradient(in, a)) < 1e-8);
      const double lambda = -0.7;
      const auto f = [&](const Eigen::VectorXd& x) { return u(x) - lambda * in(x); };
      CHECK(rel_inf(hessian_angle(a, m, k, lambda), oracle::hessian(f, a)) < 1e-5);
    }
  }
}

TEST_CASE("templated kernel agrees with long double evaluation") {
  std::mt19937_64 rng(23);
  const MassList m{1.0, 0.8, 1.3, 0.6};
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    const Eigen::VectorXd a = random_angles(4, s, rng);
    const auto d = angle_derivatives<double>(a, m, k, true);
    const auto l = angle_derivatives<long double>(a.cast<long double>(), m, k, true);
    CHECK(std::abs(d.U - double(l.U)) < 1e-12 * std::max(1.0, std::abs(d.U)));
    CHECK(rel_inf(d.hessU, l.hessU.cast<double>()) < 1e-12);
  }
}

TEST_CASE("U is invariant along the rotation orbit") {
  std::mt19937_64 rng(24);
  const MassList m{1.0, 2.0, 0.5};
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    const Eigen::VectorXd a = random_angles(3, s, rng);
    const Eigen::VectorXd r = rotation_generator_angles(a, k);
    const PotentialEval e = grad_angle(a, m, k);
    CHECK(std::abs(e.gradU.dot(r)) < 1e-10 * std::max(1.0, e.gradU.norm()));
    CHECK(std::abs(e.gradI.dot(r)) < 1e-10 * std::max(1.0, e.gradI.norm()));
  }
}

TEST_CASE("multiplier at a geodesic OCC matches the reference") {
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    const MassList m{1.0, 1.7, 0.8};
    const double c = s > 0 ? 0.2 * m.min() : 1.0;
    const GeodesicCC cc = solve_ordering(OrderingProblem{m, c, k, {0, 1, 2}});
    const Eigen::VectorXd a = geodesic_angles(cc.theta);
    const CCResidual r = multiplier_and_residual(a, m, k);
    const oracle::Multiplier ref = oracle::multiplier(a, m.values(), s);
    CHECK(r.is_occ());
    CHECK(ref.residual < 1e-8);
    CHECK(r.lambda == doctest::Approx(ref.lambda).epsilon(1e-8));
    CHECK(r.lambda < 0.0);
    const CCResidual amb = ambient_multiplier_and_residual(embed_geodesic(cc.theta, k), m, k);
    CHECK(amb.is_occ());
    CHECK(amb.lambda == doctest::Approx(r.lambda).epsilon(1e-10));
    CHECK(mc_identities(embed_geodesic(cc.theta, k), m).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("random configurations are not OCCs") {
  std::mt19937_64 rng(25);
  for (int s : {-1, 1}) {
    const Curvature k = curvature_from_sign(s);
    const MassList m{1.0, 1.0, 1.0, 1.0};
    const Eigen::VectorXd a = random_angles(4, s, rng);
    const CCResidual r = multiplier_and_residual(a, m, k);
    CHECK_FALSE(r.is_occ());
    CHECK(r.scaled_residual == doctest::Approx(oracle::multiplier(a, m.values(), s).residual).epsilon(1e-6));
  }
}

TEST_CASE("ambient multiplier on S3 matches the extension reference") {
  std::mt19937_64 rng(26);
  std::normal_distribution<double> g;
  const MassList m{1.0, 0.5, 1.5};
  Configuration q(4, 3);
  for (int i = 0; i < 3; ++i) {
    for (int r = 0; r < 4; ++r) q(r, i) = g(rng);
    q.col(i).normalize();
  }
  const CCResidual r = ambient_multiplier_and_residual(q, m, Curvature::Spherical);
  const oracle::Multiplier ref = oracle::sphere_multiplier(q, m.values());
  CHECK(r.lambda == doctest::Approx(ref.lambda).epsilon(1e-6));
  CHECK(r.scaled_residual == doctest::Approx(ref.residual).epsilon(1e-5));
}

TEST_CASE("collisions and antipodes raise SingularConfigurationError") {
  const MassList m{1.0, 1.0};
  Configuration q(4, 2);
  q.col(0) << 0, 0, 1, 0;
  q.col(1) << 0, 0, 1, 0;
  CHECK_THROWS_AS(potential<double>(q, m, Curvature::Spherical), SingularConfigurationError);
  q.col(1) << 0, 0, -1, 0;
  try {
    potential<double>(q, m, Curvature::Spherical);
    FAIL("expected SingularConfigurationError");
  } catch (const SingularConfigurationError& e) {
    CHECK(e.first == 0);
    CHECK(e.second == 1);
  }
}

TEST_CASE("multiplier is flagged degenerate on the zw circle") {
  const MassList m{1.0, 1.0, 1.0};
  Configuration q(4, 3);
  const double t[3] = {-0.5, 0.1, 0.9};
  for (int i = 0; i < 3; ++i) q.col(i) << 0, 0, std::sinh(t[i]), std::cosh(t[i]);
  const CCResidual r = ambient_multiplier_and_residual(q, m, Curvature::Hyperbolic);
  CHECK(r.degenerate);
  CHECK_FALSE(r.is_occ());
}

TEST_CASE("force equals the ambient gradient of U projected to the tangent space") {
  std::mt19937_64 rng(27);
  const MassList m{1.0, 2.0, 0.5};
  const Eigen::VectorXd a = random_angles(3, 1, rng);
  const Configuration q = embed_angles<double>(a, Curvature::Spherical);
  const Configuration f = potential_force(q, m, Curvature::Spherical);
  const oracle::Vec gU = oracle::gradient(
      [&](const oracle::Vec& x) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) {
            const Eigen::Vector4d p = x.segment<4>(4 * i).normalized(), r = x.segment<4>(4 * j).normalized();
            s += m[i] * m[j] * oracle::pair_term(p, r, 1);
          }
        return s;
      },
      Eigen::Map<const Eigen::VectorXd>(q.data(), 12), 1e-4);
  CHECK((Eigen::Map<const Eigen::VectorXd>(f.data(), 12) - gU).norm() < 1e-7 * std::max(1.0, gU.norm()));
}
