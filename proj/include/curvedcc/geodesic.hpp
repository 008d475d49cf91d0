#pragma once

#include <string>
#include <vector>

#include "curvedcc/geometry.hpp"
#include "curvedcc/tolerances.hpp"

namespace curvedcc {

// Geodesic OCCs live on H^1_{xw} (sigma=-1) or on the arc of S^1_{xz} inside
// M_c (sigma=+1), parameterized by theta alone.
struct OrderingProblem {
  MassList masses;
  double c = 1.0;
  Curvature curvature = Curvature::Hyperbolic;
  std::vector<int> ordering;  // ordering[k] = particle at the k-th position along the geodesic
};

struct GeodesicCC {
  Eigen::VectorXd theta;   // indexed by particle
  double lambda = 0.0;
  double residual = 0.0;   // |grad U - lambda grad I| / max(1, |grad U|)
  double c_achieved = 0.0;
  std::vector<int> ordering;
  double min_constrained_hessian_eig = 0.0;  // Hessian of U on {I = c} along H^1 (S^1)
  int iterations = 0;
};

// Value and derivatives of U and I along the geodesic chart.
struct GeodesicModel {
  double U = 0.0, I = 0.0;
  Eigen::VectorXd gradU, gradI;
  Eigen::MatrixXd hessU, hessI;
};
GeodesicModel geodesic_model(const Eigen::VectorXd& theta, const MassList& m, Curvature k, bool with_hessian);

// Residual of  sum_{j!=i} m_i m_j sin(theta_j - theta_i)/sin^3 d_ij = lambda m_i sin 2 theta_i
// (hyperbolic functions on H^1), per particle.
Eigen::VectorXd geodesic_cc_residual(const Eigen::VectorXd& theta, const MassList& m, Curvature k, double lambda);

// Minimizes U over the ordered component of {I = c}; the minimizer is the
// unique critical point there.
GeodesicCC solve_ordering(const OrderingProblem& p, const Tolerances& tol = default_tolerances());

struct GeodesicEnumeration {
  std::vector<GeodesicCC> solutions;  // one per ordering, n! in total
  std::vector<int> class_of;          // solution index -> class index
  std::vector<GeodesicCC> classes;    // representatives, n!/2 in total
  double max_reversal_gap = 0.0;      // gap between each ordering and its reverse
  double min_class_gap = 0.0;         // smallest gap between distinct classes
};

GeodesicEnumeration enumerate_geodesic_ccs(const MassList& m, double c, Curvature k,
                                           const Tolerances& tol = default_tolerances(), int jobs = 1);

Configuration embed_geodesic(const Eigen::VectorXd& theta, Curvature k);

struct RegimeDiagnostic {
  double c = 0.0;
  double m_min = 0.0;
  bool below_half = false;     // c < m_min / 2: |theta| < pi/4 guaranteed
  bool below_quarter = false;  // c < m_min / 4: |theta| < pi/6 guaranteed
  int solved = 0;
  int failed = 0;
  double max_abs_theta = 0.0;
  std::vector<std::string> violations;
  std::vector<std::string> failures;
  bool ok() const { return violations.empty() && failed == 0; }
};

// Solves every ordering on M_c and checks the angular bounds implied by c.
RegimeDiagnostic spherical_regime_check(const MassList& m, double c, const Tolerances& tol = default_tolerances());

std::vector<std::vector<int>> all_orderings(int n);

}  // namespace curvedcc
