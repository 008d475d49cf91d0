#include <doctest.h>

#include "curvedcc/compactness.hpp"
#include "oracles.hpp"

using namespace curvedcc;

TEST_CASE("family names round trip") {
  for (FamilyKind k : {FamilyKind::HPolygon, FamilyKind::SPolygon, FamilyKind::SCollisionAntipodal})
    CHECK(family_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(family_kind_from_string("square"), ConfigError);
  CHECK(family_curvature(FamilyKind::HPolygon) == Curvature::Hyperbolic);
  CHECK(family_curvature(FamilyKind::SCollisionAntipodal) == Curvature::Spherical);
}

TEST_CASE("log grid spans the decades with both ends") {
  const std::vector<double> g = log_grid(1e-1, 1e-4, 4);
  CHECK(g.size() == 13);
  CHECK(g.front() == doctest::Approx(1e-1));
  CHECK(g.back() == doctest::Approx(1e-4));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] < g[i - 1]);
}

TEST_CASE("polygon members are OCCs with the reference multiplier") {
  for (int n : {3, 4, 5}) {
    for (double t : {0.5, 1e-2}) {
      const FamilyMember h = polygon_family(n, 1.0, t, Curvature::Hyperbolic);
      CHECK(h.exact);
      CHECK(h.lambda < 0.0);
      Eigen::VectorXd a(2 * n);
      for (int i = 0; i < n; ++i) {
        a[i] = std::asinh(h.q(0, i));
        a[n + i] = std::atanh(h.q(1, i) / h.q(3, i));
      }
      const oracle::Multiplier ref = oracle::multiplier(a, Eigen::VectorXd::Ones(n), -1, 1e-2 * t);
      CHECK(h.lambda == doctest::Approx(ref.lambda).epsilon(1e-6));
      const FamilyMember s = polygon_family(n, 1.0, t, Curvature::Spherical);
      CHECK(s.exact);
      const oracle::Multiplier sref = oracle::sphere_multiplier(s.q, Eigen::VectorXd::Ones(n));
      CHECK(s.lambda == doctest::Approx(sref.lambda).epsilon(1e-5));
    }
  }
}

TEST_CASE("collision-antipodal members are OCCs") {
  const SingularFamily f{FamilyKind::SCollisionAntipodal, MassList{0.5, 1.0, 1.0}, {}};
  for (double t : {0.3, 1e-2}) {
    const FamilyMember mem = family_member(f, t);
    CHECK(mem.exact);
    const oracle::Multiplier ref = oracle::sphere_multiplier(mem.q, f.masses.values());
    CHECK(ref.residual < 1e-7);
    CHECK(mem.lambda == doctest::Approx(ref.lambda).epsilon(1e-5));
  }
  CHECK_THROWS(family_member(SingularFamily{FamilyKind::SCollisionAntipodal, MassList{1.0, 1.0, 2.0}, {}}, 0.1));
}

TEST_CASE("polygon multiplier diverges like d^-3") {
  for (int n : {3, 4}) {
    const SingularFamily f{FamilyKind::HPolygon, MassList(Eigen::VectorXd::Ones(n)), log_grid(1e-1, 1e-4, 4)};
    const DivergenceScan d = multiplier_divergence_scan(f);
    CHECK(d.all_exact);
    CHECK(d.all_negative);
    CHECK(d.monotone);
    CHECK(d.slope == doctest::Approx(-3.0).epsilon(0.1 / 3));
    // independent slope from the two smallest members
    const FamilyMember& a = d.rows[d.rows.size() - 2];
    const FamilyMember& b = d.rows.back();
    const double slope = std::log(std::abs(b.lambda / a.lambda)) / std::log(b.min_distance / a.min_distance);
    CHECK(slope == doctest::Approx(-3.0).epsilon(0.01));
  }
}

TEST_CASE("singularity and admissible set predicates") {
  Configuration p(4, 3);
  p.colwise() = Eigen::Vector4d(0, 0, 0, 1);
  CHECK(is_singular(p, Curvature::Hyperbolic));
  CHECK_FALSE(is_singular(polygon_configuration(3, 0.3, Curvature::Hyperbolic), Curvature::Hyperbolic));
  Configuration ca(4, 3);
  ca.col(0) << 1, 0, 0, 0;
  ca.col(1) << -1, 0, 0, 0;
  ca.col(2) << -1, 0, 0, 0;
  CHECK(is_singular(ca, Curvature::Spherical));
  // all three on S^1_{xy} u S^1_{zw}: outside the admissible set
  CHECK_FALSE(in_admissible_set(ca));
  Configuration off = ca;
  off.col(2) << 0.6, 0.0, 0.8, 0.0;
  CHECK(in_admissible_set(off));
}

TEST_CASE("exclusion scan around a partial collision") {
  ExclusionProbe p;
  Eigen::VectorXd a(6);
  a << 0.5, 0.5, -0.7, 0.0, 0.0, 0.3;
  p.center = embed_angles<double>(a, Curvature::Hyperbolic);
  p.masses = MassList{1.0, 1.0, 1.0};
  p.radii = {1e-2, 1e-3, 1e-4};
  p.samples = 300;
  p.seed = 17;
  const ExclusionReport r = exclusion_scan(p);
  CHECK(r.center_singular);
  CHECK(r.hypothesis_holds);
  CHECK(r.rows.size() == 3);
  CHECK(r.excluded(10 * default_tolerances().eps_cc));
  for (const ExclusionRow& row : r.rows) CHECK(row.samples_used + row.singular_skipped == p.samples);

  p.jobs = 2;
  const ExclusionReport again = exclusion_scan(p);
  for (std::size_t i = 0; i < r.rows.size(); ++i) CHECK(again.rows[i].min_residual == r.rows[i].min_residual);
}

TEST_CASE("total collapse is approached by polygon members") {
  ExclusionProbe p;
  p.center = Configuration(4, 3);
  p.center.colwise() = Eigen::Vector4d(0, 0, 0, 1);
  p.masses = MassList{1.0, 1.0, 1.0};
  p.radii = {1e-2, 1e-3};
  p.samples = 100;
  p.family = SingularFamily{FamilyKind::HPolygon, p.masses, {}};
  const ExclusionReport r = exclusion_scan(p);
  CHECK_FALSE(r.hypothesis_holds);
  CHECK(r.family_in_every_ball);
  for (const ExclusionRow& row : r.rows) {
    CHECK(row.family_member_inside);
    CHECK(row.family_distance <= row.radius);
    CHECK(row.family_residual < default_tolerances().eps_cc);
  }
}
