// records.hpp
// Per-step / per-comparison diagnostics rows shared by the solvers and the
// post-processing module. Fields that do not apply to a given producer stay
// NaN.

#pragma once

#include <limits>

namespace relaxhydro {

struct DiagnosticsRecord {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  long step = -1;
  double t = 0.0;
  double dt = 0.0;

  double mass = nan;
  // energy split of the damped-system total: internal/interaction/confinement
  // carry the 1/eps weights already.
  double kinetic = nan;
  double internal = nan;
  double interaction = nan;
  double confinement = nan;
  double e_total = nan;

  // free energy of the limit equation (unweighted)
  double e_free_bar = nan;

  // modulated energy against the limit solution and its parts
  double theta = nan;
  double theta_entropy = nan;
  double theta_kinetic = nan;
  double theta_interaction = nan;

  // |dE + damping work| for the producing step
  double dissipation_residual = nan;

  double l2_density_gap = nan;        // ||rho - rho_bar||_L2
  double weighted_velocity_gap = nan; // sqrt(int rho |u - u_bar|^2)
};

}  // namespace relaxhydro
