// scenario.hpp
// Orchestration shared by the CLI and the acceptance suite: initial data
// construction, single damped-system and limit-equation runs with artifact
// emission, the relaxation sweep, the property-verification suite and the
// admissibility-margin study.

#pragma once

#include <string>
#include <vector>

#include "relaxhydro/config.hpp"
#include "relaxhydro/diagnostics.hpp"
#include "relaxhydro/hyperbolic.hpp"
#include "relaxhydro/parabolic.hpp"
#include "relaxhydro/snapshot.hpp"

namespace relaxhydro {

ScalarField build_initial_density(const RunConfig& cfg);
// Well-prepared data reuses the limit-velocity reconstruction, so the
// modulated energy starts at exactly zero; `zero` starts at rest.
VectorField build_initial_velocity(const RunConfig& cfg, const ScalarField& rho0);
EulerConfig euler_config_from(const RunConfig& cfg, double epsilon);

struct EulerScenarioOutcome {
  EulerRunResult run;
  std::vector<std::string> artifacts;
};
// outdir empty: compute only, write nothing.
EulerScenarioOutcome run_euler_scenario(const RunConfig& cfg,
                                        const std::string& outdir);

struct LimitScenarioOutcome {
  DiffusionRunResult run;
  std::vector<LimitVelocity> velocities;
  std::vector<std::string> artifacts;
};
LimitScenarioOutcome run_limit_scenario(const RunConfig& cfg,
                                        const std::string& outdir);

struct SweepPointOutcome {
  double epsilon = 0.0;
  double theta0 = 0.0;
  double sup_theta = 0.0;
  double l2_density_gap_max = 0.0;
  double velocity_gap_linf_l2 = 0.0;  // sup_t sqrt(int rho |u-u_bar|^2)
  double velocity_gap_l2l2 = 0.0;     // sqrt(int_t int rho |u-u_bar|^2)
  bool euler_aborted = false;
  // interaction-bound witnesses over this run's snapshots
  double c_star_max = 0.0;
  bool c_star_finite = true;
  double min_coercivity_margin = 0.0;  // min of ratio - (1 - c_k c_star/2)
  std::vector<double> theta_times;
  std::vector<double> theta_series;
};

struct SweepOutcome {
  std::vector<SweepPointOutcome> points;  // in the order of cfg.epsilons
  SweepResult fit;
  bool limit_aborted = false;
  std::vector<std::string> artifacts;
};
// Runs the limit trajectory once and one damped run per epsilon (trajectories
// in parallel, file output single-threaded). Honors RELAX_HYDRO_THREADS.
SweepOutcome run_sweep(const RunConfig& cfg, const std::string& outdir);

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};
struct VerifyOutcome {
  std::vector<CheckItem> items;
  bool all_pass = true;
};
// Property suites: entropy-law identities and certificates, discrete calculus
// adjointness, convolution route equivalence, decomposition idempotence, the
// pointwise eigenvalue inequality, the mean-flow ODE and witness checks.
VerifyOutcome run_verify(const RunConfig& cfg);

struct SubsolutionOutcome {
  double pi_min = 0.0;
  bool negative_at_pi_min = false;
  bool violation_below_pi_min = false;
  double decomposition_error = 0.0;  // reconstruction + divergence residuals
  double correction_residual = 0.0;
  double correction_trace = 0.0;
  std::vector<std::string> artifacts;
};
SubsolutionOutcome run_subsolution_study(const RunConfig& cfg,
                                         const std::string& outdir);

// RELAX_HYDRO_THREADS (>=1), default: hardware concurrency.
int worker_thread_count();

}  // namespace relaxhydro
