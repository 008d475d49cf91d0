#pragma once

namespace curvedcc {

// Numerical thresholds shared by every module. Defaults are the values the
// verification suite is pinned to; experiment configs may override them
// within three decades of the default.
struct Tolerances {
  double eps_mfld = 1e-9;      // |q.q - sigma| after projection
  double eps_class = 1e-6;     // class_gap below this means "same class"
  double d_min = 1e-8;         // pair separation treated as singular
  double h_fd_grad = 1e-5;     // finite-difference steps (test oracles)
  double h_fd_hess = 1e-4;
  double eps_fd = 1e-6;        // relative gradient agreement
  double eps_fd_abs = 1e-9;
  double eps_cc = 1e-8;        // scaled CC residual acceptance
  double eps_con = 1e-10;      // |I - c| / max(1, c)
  int max_iter = 200;
  double tol_zero_rel = 1e-7;  // zero eigenvalue band, relative to spectral radius
  double gap_min = 1e-9;       // strict spectral ordering margin
  double eps_dyn = 1e-6;       // RE closed form vs integration
  double newton_tol = 1e-12;   // Newton step norm
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace curvedcc
