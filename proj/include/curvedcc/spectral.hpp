#pragma once

#include <string>
#include <vector>

#include "curvedcc/geodesic.hpp"

namespace curvedcc {

struct InertiaTriple {
  int n0 = 0, n_plus = 0, n_minus = 0;
  int dim() const { return n0 + n_plus + n_minus; }
  bool operator==(const InertiaTriple&) const = default;
};

struct Inertia {
  InertiaTriple triple;
  Eigen::VectorXd eigenvalues;  // ascending
  double tol_zero = 0.0;
  // How cleanly the eigenvalues separate from the threshold, in units of
  // tol_zero: min over nonzero |mu|/tol and over zero tol/|mu|.
  double margin = 0.0;
};

// Eigenvalues within tol_zero_rel * spectral radius of zero count as zero.
Inertia matrix_inertia(const Eigen::MatrixXd& sym, double tol_zero_rel = default_tolerances().tol_zero_rel);

// Orthonormal basis of the Euclidean complement of span(cols).
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& cols, int dim);

// Inertia of D^2(U - lambda I) on the tangent space of {I = c} modulo the
// rotation orbit, at any OCC given in angle coordinates. Dimension 2n - 2.
Inertia constrained_quotient_inertia(const Eigen::VectorXd& angles, const MassList& m, Curvature k, double lambda,
                                     double tol_zero_rel = default_tolerances().tol_zero_rel);

struct HessianBlocks {
  Eigen::MatrixXd full;   // 2n x 2n in (theta, phi)
  Eigen::MatrixXd H1;     // theta-theta block
  Eigen::MatrixXd H1_restricted;  // on the complement of grad I
  Eigen::MatrixXd H2;     // phi-phi block
  Eigen::MatrixXd H2_quotient;    // on the complement of the rotation direction
  Eigen::VectorXd rotation_phi;   // phi-part of the rotation orbit tangent
  double cross_block_max = 0.0;
};

HessianBlocks build_blocks(const GeodesicCC& cc, const MassList& m, Curvature k);

// A_ij = m_j / sin^3 d_ij, A_ii = -sum_j m_j C_j / (C_i sin^3 d_ij), with
// C = cos theta (cosh on H^1); then H2 = C M (A - 2 lambda) C.
Eigen::MatrixXd build_A(const GeodesicCC& cc, const MassList& m, Curvature k);

struct SpectralReport {
  Eigen::VectorXd eigs_A;  // descending, from the M-symmetrized matrix
  double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;  // mu3 is -inf for n = 2
  double two_lambda = 0.0;
  double c1_residual = 0.0;  // |A c1| / |c1|
  double c2_residual = 0.0;  // |A c2 - 2 lambda c2| / |c2|
  double c1c2_M = 0.0;       // sum m_i C_i S_i
  double H2_identity_error = 0.0;  // max |H2 - C M (A - 2 lambda) C|
  double CMAC_row_sum_max = 0.0;
  double M_orthogonality_error = 0.0;
  double cross_block_max = 0.0;
  double H1_min_eig = 0.0;
  Inertia inertia_H1;      // on V1
  Inertia inertia_H2;      // on V2
  Inertia inertia_H2_quotient;
  Inertia inertia_A_shift; // A - 2 lambda, M-symmetrized
  Inertia inertia_total;   // on S_c / S^1
  bool ordering_ok = false;  // mu1 ~ 0, mu2 ~ 2 lambda, mu3 < 2 lambda - gap_min
  bool degenerate = false;   // another eigenvalue within tol_zero of 2 lambda
  std::string orbit_direction_note;
};

SpectralReport spectral_ordering_check(const GeodesicCC& cc, const MassList& m, Curvature k,
                                       const Tolerances& tol = default_tolerances());

struct ConeReport {
  bool tangent_ratios_monotone = false;
  int triples_checked = 0;
  int triples_failed = 0;
  double min_triple_value = 0.0;
  int boundary_samples = 0;
  int boundary_failed = 0;
  double min_LYg = 0.0;
  std::vector<std::string> failures;
  bool ok() const { return tangent_ratios_monotone && triples_failed == 0 && boundary_failed == 0; }
};

// Verifies c2 in K, the distance inequality families and the inward flow on
// sampled boundary points of K.
ConeReport cone_and_inequality_checks(const GeodesicCC& cc, const MassList& m, Curvature k, int boundary_samples = 200,
                                      unsigned seed = 1);

}  // namespace curvedcc
