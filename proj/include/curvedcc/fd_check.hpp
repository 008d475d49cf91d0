#pragma once

#include <cstdint>

#include "curvedcc/potentials.hpp"

namespace curvedcc {

struct FDCheckReport {
  int samples = 0;
  double max_grad_error = 0.0;  // |analytic - fd|_inf / max(1, |analytic|_inf)
  double max_hess_error = 0.0;
  double grad_limit = 0.0;
  double hess_limit = 0.0;
  bool grad_ok() const { return max_grad_error < grad_limit; }
  bool hess_ok() const { return max_hess_error < hess_limit; }
};

// Central differences of U and I (gradients) and of the analytic gradients
// (Hessians) on random angle configurations with n in [3, 5] and every pair
// separated by at least min_separation.
FDCheckReport finite_difference_check(Curvature k, int samples, std::uint64_t seed,
                                      const Tolerances& tol = default_tolerances(), double hess_limit = 1e-5,
                                      double min_separation = 0.2);

}  // namespace curvedcc
