#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvedcc/geodesic.hpp"
#include "curvedcc/spectral.hpp"

namespace curvedcc {

struct PlanarSearchConfig {
  MassList masses;
  double c = 1.0;
  Curvature curvature = Curvature::Hyperbolic;
  int n_starts = 0;  // 0 selects 500 n
  std::uint64_t seed = 0;
  int jobs = 1;
  Tolerances tol = default_tolerances();
};

// An OCC on H^2_{xyw} or on M_c inside S^2_{xyz}.
struct CCSolution {
  Eigen::VectorXd angles;  // (theta_1..theta_n, phi_1..phi_n)
  Configuration q;
  double lambda = 0.0;
  double residual = 0.0;
  double I = 0.0;
  bool geodesic = false;
  int geodesic_match = -1;  // class index in enumerate_geodesic_ccs, geodesic classes only
  int mirror_of = -1;       // class holding the y-reflection of this one (itself if symmetric)
  Inertia inertia;          // on S_c / S^1 (M_c / S^1)
  bool degenerate = false;  // a zero eigenvalue survives the quotient
  int hits = 0;             // converged starts landing in this class
};

struct CCCatalog {
  std::vector<CCSolution> classes;  // modulo the continuous symmetry group
  int total = 0, geodesic = 0, nongeodesic = 0;
  int total_mod_reflection = 0, nongeodesic_mod_reflection = 0;
  int starts = 0, converged = 0, failed = 0;
  std::vector<std::string> failure_log;  // first few failures
  int expected_geodesic = 0;             // n!/2
  bool geodesic_cross_match = false;     // one-to-one with enumerate_geodesic_ccs
  double min_class_gap = 0.0;
  int palmore_total_bound = 0, palmore_nongeodesic_bound = 0;
  bool palmore_ok() const { return total >= palmore_total_bound && nongeodesic >= palmore_nongeodesic_bound; }
};

// Newton on (grad U - lambda grad I, I - c) in 2n + 1 unknowns from one start.
// Returns false when the start does not converge to an OCC.
bool newton_occ(Eigen::VectorXd& angles, double& lambda, const MassList& m, double c, Curvature k,
                const Tolerances& tol, std::string* why = nullptr);

CCCatalog multistart_solve(const PlanarSearchConfig& cfg);

// Geodesic iff the ambient 4 x n matrix has rank 2.
bool is_geodesic_configuration(const Configuration& q, double rel_tol = 1e-7);

// Sorted subset sums of the masses with repeats collapsed.
std::vector<double> critical_values_I(const MassList& m);

struct TwoBodyProbe {
  double mass = 0.0;
  std::vector<double> t;          // theta_1 along the family, theta_2 = theta_1 + pi/2
  std::vector<double> lambda;
  std::vector<double> residual;
  std::vector<InertiaTriple> inertia;
  int samples_ok = 0;              // residual < eps_cc and inertia (1, 1, 0)
  double symmetric_ansatz_theta = 0.0;  // the one member with theta_1 = -theta_2
  double perturbed_c = 0.0;
  int perturbed_classes = 0;
  bool perturbed_isolated = false;  // all classes nondegenerate at c = m - delta
};

// Equal masses m on S^2 at c = m: the OCCs form a one-parameter continuum.
TwoBodyProbe degenerate_two_body_probe(double m, int samples = 20, double delta = 1e-2,
                                       const Tolerances& tol = default_tolerances());

// Three bodies on S^2_{xyz}: OCC iff sum m z x = sum m z y = 0 and z is
// proportional to (sin^3 d23, sin^3 d13, sin^3 d12). The characterization
// covers non-geodesic configurations only; geodesic OCCs generally fail the
// proportionality.
bool three_body_s3_criterion(const Configuration& q, const MassList& m, double eps = default_tolerances().eps_cc);

}  // namespace curvedcc
