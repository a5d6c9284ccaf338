// diagnostics.hpp
// Post-processing functionals: the energy split of the damped system, the
// modulated energy Theta comparing a damped-system state against the limit
// solution, the time-integrated identity residual that Theta satisfies along
// exact solutions, interaction-energy bound witnesses, and the relaxation
// sweep fit.

#pragma once

#include <utility>
#include <vector>

#include "relaxhydro/hyperbolic.hpp"
#include "relaxhydro/parabolic.hpp"
#include "relaxhydro/records.hpp"

namespace relaxhydro {

struct EnergyParts {
  double kinetic = 0.0;
  double internal = 0.0;      // (1/eps) int h(rho)
  double interaction = 0.0;   // (c_k/2 eps) int (K*rho) rho
  double confinement = 0.0;   // (1/eps) int rho Phi
  double total() const { return kinetic + internal + interaction + confinement; }
};

EnergyParts energy_parts(const EulerState& state, const EulerConfig& cfg);
double total_energy(const EulerState& state, const EulerConfig& cfg);

// Theta = (1/eps) int h(rho|rho_bar) + 1/2 int rho |u - u_bar|^2
//       + (c_k/2 eps) int (rho - rho_bar) K*(rho - rho_bar).
// Fills the theta fields, the gap norms, mass and the energy split.
DiagnosticsRecord theta(const EulerState& state, const DiffusionState& limit,
                        const LimitVelocity& limit_velocity,
                        const EulerConfig& cfg);

// Linear-in-time interpolation of the stored limit trajectory (both the
// density and the reconstructed velocity/defect fields).
std::pair<DiffusionState, LimitVelocity> interpolate_limit(
    const std::vector<DiffusionState>& states,
    const std::vector<LimitVelocity>& velocities, double t);

// Both sides of the modulated-energy balance over [0, t]: the Theta
// difference equals minus the time integrals of the damping term, the
// velocity-gradient quadratic form, the defect coupling, the relative
// pressure dilation and the interaction transport term.
struct ResidualReport {
  double lhs = 0.0;  // Theta(t) - Theta(0)
  double rhs = 0.0;  // sum of the integrated terms
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|, 1e-30)
  double damping_term = 0.0;
  double velocity_gradient_term = 0.0;
  double defect_coupling_term = 0.0;
  double pressure_dilation_term = 0.0;
  double interaction_transport_term = 0.0;
};

ResidualReport relative_entropy_residual(const EulerRunResult& euler_run,
                                         const std::vector<DiffusionState>& limit_states,
                                         const std::vector<LimitVelocity>& limit_velocities,
                                         const EulerConfig& cfg, double t);

// Interaction-energy bound witness:
//   lhs = |int (rho-rho_bar) K*(rho-rho_bar)|, rhs = int h(rho|rho_bar),
//   c_star = lhs/rhs (0 when both vanish).
struct HlsWitness {
  double lhs = 0.0;
  double rhs = 0.0;
  double c_star = 0.0;
};
HlsWitness hls_check(const ScalarField& rho, const ScalarField& rho_bar,
                     const ScalarField& kernel, const EntropyLaw& law);

// [int h(rho|rho_bar) + (c_k/2) int (rho-rho_bar)K*(rho-rho_bar)] / int h;
// returns 1 for the identity case.
double coercivity_check(const ScalarField& rho, const ScalarField& rho_bar,
                        const ScalarField& kernel, const EntropyLaw& law,
                        double c_k);

struct SweepResult {
  std::vector<double> epsilons;   // strictly decreasing
  std::vector<double> sup_theta;  // sup over time of Theta per epsilon
  std::vector<double> constants;  // sup_theta / epsilon
  double fitted_order = 0.0;      // least-squares slope of log sup_theta vs log eps
  bool monotone = true;           // sup_theta decreasing along decreasing eps
};

SweepResult convergence_fit(const std::vector<std::pair<double, double>>& sweep);

}  // namespace relaxhydro
