// hyperbolic.hpp
// Finite-volume integrator for the damped nonlocal Euler system on the torus:
//
//   d_t rho + div(rho u) = 0
//   d_t(rho u) + div(rho u x u) + (1/eps) grad p(rho)
//       = -(c_k/eps)(grad K * rho) rho - (1/eps) rho u - (1/eps) rho grad Phi
//
// Space: first-order local Lax-Friedrichs (Rusanov) fluxes, unsplit over the
// axes. Time: Strang splitting with a semi-implicit damping update, so the
// stiff 1/eps source never limits stability; dt is additionally capped by
// 0.5*eps so the frozen-force substep resolves the relaxation scale.

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxhydro/entropy.hpp"
#include "relaxhydro/grid.hpp"
#include "relaxhydro/potential.hpp"
#include "relaxhydro/records.hpp"

namespace relaxhydro {

struct EulerState {
  ScalarField rho;
  VectorField mom;  // rho * u
  double t = 0.0;
};

struct EulerConfig {
  double epsilon = 1.0;
  EntropyLaw law = EntropyLaw::power_law(2.0, 1.0);
  PotentialSpec interaction;  // K
  PotentialSpec confinement;  // Phi
  double c_k = 0.0;
  double cfl = 0.45;          // in (0, 1]
  double t_end = 1.0;
  int snapshot_stride = 16;   // steps between stored snapshots
  double rho_floor = 1e-10;
  long max_steps = 50'000'000;
};

// Solver-detected invalid states (positivity loss, non-finite values) abort
// the run; they are not usage errors.
struct RunAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// max over cells and axes of |u_a| + sqrt(p'(rho)/eps)
double max_wave_speed(const EulerState& state, const EulerConfig& cfg);

// One forward-Euler update of the flux terms only (pressure scaled by 1/eps);
// mass and momentum telescope exactly. Pre: dt*max_wave_speed <= cfl*dx.
EulerState flux_step(const EulerState& state, const EulerConfig& cfg, double dt);

// Semi-implicit damped momentum update with the force field frozen at entry:
//   m <- (m - (dt/eps) rho (c_k grad(K*rho) + grad Phi)) / (1 + dt/eps)
// Density and time are unchanged.
EulerState source_step(const EulerState& state, const EulerConfig& cfg, double dt);

struct EulerRunResult {
  std::vector<EulerState> snapshots;      // includes t = 0 and the final state
  std::vector<DiagnosticsRecord> steps;   // row 0 is the initial state
  bool aborted = false;
  std::string abort_reason;
  long total_steps = 0;
};

using EulerObserver =
    std::function<void(const EulerState&, const DiagnosticsRecord&)>;

// Strang-split run to t_end with adaptive dt; emits a snapshot every
// snapshot_stride steps and a diagnostics row every step. On positivity loss
// the result carries the abort reason and the last valid snapshot.
EulerRunResult run_euler(const EulerConfig& cfg, const ScalarField& rho0,
                         const VectorField& u0,
                         const std::vector<EulerObserver>& observers = {});

}  // namespace relaxhydro
