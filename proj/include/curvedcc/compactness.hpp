#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvedcc/geometry.hpp"
#include "curvedcc/potentials.hpp"

namespace curvedcc {

enum class FamilyKind { HPolygon, SPolygon, SCollisionAntipodal };
std::string to_string(FamilyKind k);
FamilyKind family_kind_from_string(const std::string& s);
Curvature family_curvature(FamilyKind k);

// One-parameter family of exact OCCs converging to a singular configuration
// as theta -> 0. Polygons take n equal masses; the collision-antipodal family
// takes masses (m, M, M).
struct SingularFamily {
  FamilyKind kind = FamilyKind::HPolygon;
  MassList masses;
  std::vector<double> grid;  // theta values
};

struct FamilyMember {
  double theta = 0.0;
  Configuration q;
  double lambda = 0.0;
  double residual = 0.0;  // scaled ambient CC residual
  double I = 0.0;
  double min_distance = 0.0;
  bool exact = false;     // residual < eps_cc
};

// Regular n-gon at latitude theta:
// (sinh t cos 2 pi i/n, sinh t sin 2 pi i/n, 0, cosh t) on H^3,
// (sin t cos 2 pi i/n, sin t sin 2 pi i/n, cos t, 0) on S^3.
Configuration polygon_configuration(int n, double theta, Curvature k);
// q1 = (1,0,0,0), q2,3 = (-cos t, 0, +-sin t, 0)
Configuration collision_antipodal_configuration(double theta);

FamilyMember family_member(const SingularFamily& f, double theta, const Tolerances& tol = default_tolerances());
FamilyMember polygon_family(int n, double mass, double theta, Curvature k,
                            const Tolerances& tol = default_tolerances());

// hi, ..., lo with per_decade points per factor of ten (both ends included).
std::vector<double> log_grid(double hi, double lo, int per_decade);

struct DivergenceScan {
  std::vector<FamilyMember> rows;  // in grid order
  bool all_exact = false;
  bool all_negative = false;
  bool monotone = false;  // lambda strictly decreasing as theta decreases
  double slope = 0.0;     // d log|lambda| / d log d_min over the smallest decade
  int fit_points = 0;
};

DivergenceScan multiplier_divergence_scan(const SingularFamily& f, const Tolerances& tol = default_tolerances());

struct ExclusionProbe {
  Configuration center;
  MassList masses;
  Curvature curvature = Curvature::Hyperbolic;
  std::vector<double> radii;   // defaults to four radii from 1e-2 to 1e-5
  int samples = 10000;         // per radius
  std::uint64_t seed = 0;
  int jobs = 1;
  std::optional<SingularFamily> family;  // family converging to the center, if any
};

struct ExclusionRow {
  double radius = 0.0;
  double min_residual = 0.0;  // over the random samples
  int samples_used = 0;
  int singular_skipped = 0;
  bool family_member_inside = false;
  double family_theta = 0.0;
  double family_residual = 0.0;
  double family_distance = 0.0;  // max pointwise distance to the center
};

struct ExclusionReport {
  std::vector<ExclusionRow> rows;
  double center_I = 0.0;
  bool center_singular = false;
  bool hypothesis_holds = false;  // I(X) > 0 on H^3, X in the admissible set on S^3
  bool monotone = false;          // min residual non-increasing in radius, up to noise
  double monotone_noise = 0.25;   // relative slack allowed by the monotone check
  double max_monotone_violation = 0.0;
  double min_residual = 0.0;      // over all radii
  bool family_in_every_ball = false;
  bool excluded(double threshold) const { return min_residual > threshold; }
};

// Random configurations in shrinking balls around the center. Perturbations
// are tangent, orthogonal to the symmetry orbit, and pushed through the
// exponential map; the ball is max_i d(q_i, X_i) <= radius.
ExclusionReport exclusion_scan(const ExclusionProbe& p, const Tolerances& tol = default_tolerances());

// True when some pair collides (or is antipodal on S^3) within eps.
bool is_singular(const Configuration& q, Curvature k, double eps = 1e-12);
// Not every particle lies on S^1_{xy} u S^1_{zw}, and some pair collides or is antipodal.
bool in_admissible_set(const Configuration& q, double eps = 1e-12);

}  // namespace curvedcc
