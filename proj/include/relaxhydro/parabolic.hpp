// parabolic.hpp
// Explicit conservative integrator for the limiting aggregation-diffusion
// equation
//
//   d_t rho_bar = div( grad p(rho_bar) + c_k rho_bar grad(K*rho_bar)
//                      + rho_bar grad Phi )
//
// plus the reconstruction of the limit velocity
//   u_bar = -grad h'(rho_bar) - c_k grad(K*rho_bar) - grad Phi
// and of the momentum defect e_bar = d_t(rho_bar u_bar) + div(rho_bar
// u_bar x u_bar) by time-differencing the stored trajectory.

#pragma once

#include <string>
#include <vector>

#include "relaxhydro/entropy.hpp"
#include "relaxhydro/grid.hpp"
#include "relaxhydro/potential.hpp"

namespace relaxhydro {

struct DiffusionState {
  ScalarField rho_bar;  // > 0 everywhere
  double t = 0.0;
};

struct LimitVelocity {
  VectorField u_bar;
  VectorField e_bar;
  double t = 0.0;
  // endpoints of the trajectory get one-sided (first-order) time differences
  bool e_bar_one_sided = false;
};

// Right side in conservation form; integrates to zero over the torus.
ScalarField diffusion_rhs(const ScalarField& rho_bar, const EntropyLaw& law,
                          const PotentialSpec& K, const PotentialSpec& Phi,
                          double c_k);

struct DiffusionRunResult {
  std::vector<DiffusionState> snapshots;  // uniform snapshot times incl. 0, t_end
  // free energy int(h + (c_k/2)(K*rho)rho + rho Phi) sampled every step
  std::vector<double> energy_times;
  std::vector<double> free_energy;
  bool aborted = false;
  std::string abort_reason;
  long total_steps = 0;
};

// Forward Euler with dt <= 0.2 dx^2 / max p'(rho_bar) and
// dt <= 0.2 dx / max |c_k grad(K*rho_bar) + grad Phi|, recomputed per
// snapshot interval so the stored snapshot times are exact.
DiffusionRunResult run_diffusion(const ScalarField& rho0, const EntropyLaw& law,
                                 const PotentialSpec& K, const PotentialSpec& Phi,
                                 double c_k, double t_end, int snapshot_count = 64);

// u_bar for a single state; e_bar is zeroed and flagged one-sided (no
// trajectory to difference).
LimitVelocity reconstruct_u_bar(const DiffusionState& state, const EntropyLaw& law,
                                const PotentialSpec& K, const PotentialSpec& Phi,
                                double c_k);

// u_bar and e_bar along a stored trajectory (nonuniform 3-point time
// differences in the interior, one-sided at the ends).
std::vector<LimitVelocity> reconstruct_limit_velocities(
    const DiffusionRunResult& run, const EntropyLaw& law, const PotentialSpec& K,
    const PotentialSpec& Phi, double c_k);

// -grad h'(rho) - c_k grad(K*rho) - grad Phi on sampled fields; also the
// well-prepared initial velocity of the damped system.
VectorField equilibrium_velocity(const ScalarField& rho, const EntropyLaw& law,
                                 const PotentialSpec& K, const PotentialSpec& Phi,
                                 double c_k);

}  // namespace relaxhydro
