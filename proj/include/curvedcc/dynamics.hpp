#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curvedcc/geometry.hpp"
#include "curvedcc/tolerances.hpp"

namespace curvedcc {

struct State {
  Configuration q;
  Configuration v;
  double t = 0.0;
};

// m_i a_i = grad_i U - sigma m_i <v_i, v_i> q_i, with grad_i U the force.
Configuration eom_rhs(const State& s, const MassList& m, Curvature k, double d_min = default_tolerances().d_min);

double kinetic_energy(const State& s, const MassList& m, Curvature k);
// K - U
double total_energy(const State& s, const MassList& m, Curvature k);
// Momenta of the xy rotation and of the zw rotation (boost on H^3).
Eigen::Vector2d plane_momenta(const State& s, const MassList& m, Curvature k);
State project_state(const State& s, Curvature k);

struct TrajectorySample {
  double t = 0.0;
  Configuration q, v;
  double energy = 0.0;
  double constraint_drift = 0.0;  // before projection, on the last step
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double max_constraint_drift = 0.0;
  double energy_drift = 0.0;     // max |E(t) - E(0)| / max(1, |E(0)|)
  double momentum_drift = 0.0;   // same for the plane momenta
  bool terminated = false;       // stopped near a collision
  std::string termination_reason;
  State final_state;
};

// Fixed-step RK4 with projection after each step. observer(state) is called
// after every step when set.
Trajectory integrate(const State& s0, const MassList& m, Curvature k, double T, double dt, int sample_every = 100,
                     const std::function<void(const State&)>& observer = {});

enum class REKind { Elliptic, Hyperbolic, EllipticElliptic, EllipticHyperbolic, Equilibrium };
std::string to_string(REKind k);

struct REFamily {
  double alpha = 0.0, beta = 0.0, s = 0.0;
  REKind kind = REKind::Equilibrium;
  double lambda = 0.0;
  Configuration base;
  Curvature curvature = Curvature::Hyperbolic;
};

REKind classify_re(double alpha, double beta, Curvature k);

// (alpha, beta) on the family of an OCC with multiplier lambda at parameter s.
Eigen::Vector2d re_parameters(double lambda, double s, Curvature k);

std::vector<REFamily> re_families_from_cc(const Configuration& q, double lambda, Curvature k,
                                          const std::vector<double>& s_grid);

// Generator xi of the subgroup, Q(t) = exp(t xi).
Eigen::Matrix4d re_generator(double alpha, double beta, Curvature k);
Eigen::Matrix4d re_matrix(double alpha, double beta, double t, Curvature k);
State re_state(const REFamily& f, double t);

struct REVerification {
  double max_deviation = 0.0;     // max_i |Q(t)^{-1} q_i(t) - q_i(0)| over the integration
  double max_eom_residual = 0.0;  // closed form in the equations of motion, relative to max(1, |a|)
  double energy_drift = 0.0;
  double growth_rate = 0.0;       // fitted exponential rate of the deviation
  double linear_growth_rate = 0.0;  // largest real part of the linearization, co-moving frame
  double horizon = 0.0;           // last time the deviation was still below eps_dyn
  bool passed = false;
  bool integration_terminated = false;
  bool precision_lost = false;    // closed form left the representable range of the ambient coordinates
  std::string note;
};

// Largest real part among the eigenvalues of the flow linearized at the
// relative equilibrium, written in the frame moving with Q(t) and restricted
// to the tangent space of the state constraints.
double re_linear_growth_rate(const REFamily& f, const MassList& m);

REVerification verify_re(const REFamily& f, const MassList& m, double T, double dt,
                         double eps_dyn = default_tolerances().eps_dyn, int residual_samples = 50);

// max over t of |A_{beta,alpha}(t) tau q - tau A_{alpha,beta}(t) q|
double tau_duality_error(const Configuration& q, double alpha, double beta, const std::vector<double>& times);

// Each initial velocity is orthogonal to the geodesic through the configuration.
bool geodesic_velocity_orthogonality(const REFamily& f, double tol = 1e-10);

struct PeriodicityLabel {
  bool periodic = false;
  int p = 0, q = 0;  // alpha / beta = p / q
  double period = 0.0;
  std::string label;  // periodic, quasi-periodic, unbounded
};

PeriodicityLabel periodicity_label(double alpha, double beta, Curvature k, int max_denominator = 50,
                                   double accept = 1e-9);

}  // namespace curvedcc
