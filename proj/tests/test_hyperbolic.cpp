// test_hyperbolic.cpp
// Damped-system integrator: wave-speed arithmetic, an independent
// re-implementation of the flux sweep as the oracle, exact conservation,
// the semi-implicit damping algebra and short whole-run invariants.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "relaxhydro/diagnostics.hpp"
#include "relaxhydro/hyperbolic.hpp"
#include "relaxhydro/parabolic.hpp"

using namespace relaxhydro;

namespace {

EulerConfig base_config(double eps, double m, double k) {
  EulerConfig cfg;
  cfg.epsilon = eps;
  cfg.law = EntropyLaw::power_law(m, k);
  return cfg;
}

EulerState bump_state_1d(int n, double amplitude, double width) {
  const PeriodicGrid g = PeriodicGrid::make(1, n, 1.0);
  EulerState s;
  s.rho = sample(g, [&](const std::array<double, 3>& x) {
    return 1.0 + amplitude * std::exp(-0.5 * x[0] * x[0] / (width * width));
  });
  s.mom = VectorField(g);
  for (int i = 0; i < n; ++i)
    s.mom.comp[0][i] = 0.1 * std::sin(M_PI * g.center(i)) * s.rho.values[i];
  return s;
}

// Straightforward loop re-implementation of the 1D update (no kernel layer):
// the oracle for flux_step.
EulerState naive_flux_step_1d(const EulerState& s, const EulerConfig& cfg,
                              double dt) {
  const int n = s.rho.grid.n;
  const double dx = s.rho.grid.dx;
  const auto& rho = s.rho.values;
  const auto& mom = s.mom.comp[0];
  std::vector<double> frho(n), fmom(n), speed(n);
  for (int i = 0; i < n; ++i) {
    const double u = mom[i] / rho[i];
    frho[i] = mom[i];
    fmom[i] = mom[i] * u + cfg.law.pressure(rho[i]) / cfg.epsilon;
    speed[i] =
        std::fabs(u) + std::sqrt(cfg.law.pressure_prime(rho[i]) / cfg.epsilon);
  }
  auto face = [&](const std::vector<double>& q, const std::vector<double>& f,
                  int i) {
    const int j = (i + 1) % n;
    const double a = std::max(speed[i], speed[j]);
    return 0.5 * (f[i] + f[j]) - 0.5 * a * (q[j] - q[i]);
  };
  EulerState out = s;
  for (int i = 0; i < n; ++i) {
    const int im = (i + n - 1) % n;
    out.rho.values[i] = rho[i] - dt / dx * (face(rho, frho, i) - face(rho, frho, im));
    out.mom.comp[0][i] = mom[i] - dt / dx * (face(mom, fmom, i) - face(mom, fmom, im));
  }
  return out;
}

}  // namespace

TEST_CASE("max wave speed arithmetic") {
  const PeriodicGrid g = PeriodicGrid::make(1, 32, 1.0);
  EulerState s;
  s.rho = ScalarField(g);
  s.rho.values.assign(s.rho.size(), 1.0);
  s.mom = VectorField(g);

  CHECK(max_wave_speed(s, base_config(1.0, 2.0, 1.0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  // vanishing pressure leaves pure transport
  for (double& v : s.mom.comp[0]) v = 3.0;
  CHECK(max_wave_speed(s, base_config(1.0, 2.0, 1e-30)) ==
        doctest::Approx(3.0).epsilon(1e-9));

  // halving eps scales the sound part by sqrt(2)
  for (double& v : s.mom.comp[0]) v = 0.0;
  const double s1 = max_wave_speed(s, base_config(1.0, 2.0, 1.0));
  const double s2 = max_wave_speed(s, base_config(0.5, 2.0, 1.0));
  CHECK(s2 == doctest::Approx(std::sqrt(2.0) * s1).epsilon(1e-14));

  s.rho.values[3] = -1.0;
  CHECK_THROWS_AS(max_wave_speed(s, base_config(1.0, 2.0, 1.0)),
                  std::domain_error);
}

TEST_CASE("flux step: uniform states are exact fixed points") {
  for (int dim : {1, 2}) {
    const PeriodicGrid g = PeriodicGrid::make(dim, 24, 1.0);
    EulerState s;
    s.rho = ScalarField(g);
    s.rho.values.assign(s.rho.size(), 1.4);
    s.mom = VectorField(g);
    const EulerConfig cfg = base_config(1.0, 2.0, 1.0);
    const EulerState out = flux_step(s, cfg, 1e-3);
    for (std::size_t i = 0; i < s.rho.size(); ++i)
      CHECK(out.rho.values[i] == 1.4);
    for (int a = 0; a < dim; ++a)
      for (double v : out.mom.comp[a]) CHECK(v == 0.0);
  }
}

TEST_CASE("flux step conserves mass and momentum to rounding") {
  const EulerConfig cfg = base_config(1.0, 2.0, 1.0);
  EulerState s = bump_state_1d(128, 0.5, 0.25);
  const double dt = 0.2 * s.rho.grid.dx / max_wave_speed(s, cfg);
  const EulerState out = flux_step(s, cfg, dt);
  const double m0 = integrate(s.rho);
  const double m1 = integrate(out.rho);
  CHECK(std::fabs(m1 - m0) <= 1e-14 * std::fabs(m0));
  double p0 = 0.0, p1 = 0.0;
  for (int i = 0; i < 128; ++i) {
    p0 += s.mom.comp[0][i];
    p1 += out.mom.comp[0][i];
  }
  CHECK(std::fabs(p1 - p0) <= 1e-12 * (1.0 + std::fabs(p0)));
}

TEST_CASE("flux step matches an independent re-implementation") {
  const EulerConfig cfg = base_config(1.0, 2.0, 1.0);
  EulerState s = bump_state_1d(64, 0.4, 0.2);
  const double dt = 1e-4;
  const EulerState fast = flux_step(s, cfg, dt);
  const EulerState slow = naive_flux_step_1d(s, cfg, dt);
  for (int i = 0; i < 64; ++i) {
    CHECK(std::fabs(fast.rho.values[i] - slow.rho.values[i]) <= 1e-13);
    CHECK(std::fabs(fast.mom.comp[0][i] - slow.mom.comp[0][i]) <= 1e-13);
  }
}

TEST_CASE("flux step rejects CFL violations") {
  const EulerConfig cfg = base_config(1.0, 2.0, 1.0);
  EulerState s = bump_state_1d(64, 0.4, 0.2);
  const double dt_bad = 10.0 * s.rho.grid.dx / max_wave_speed(s, cfg);
  CHECK_THROWS_AS(flux_step(s, cfg, dt_bad), std::invalid_argument);
}

TEST_CASE("source step: damping algebra") {
  const PeriodicGrid g = PeriodicGrid::make(1, 16, 1.0);
  EulerState s;
  s.rho = ScalarField(g);
  s.rho.values.assign(16, 1.0);
  s.mom = VectorField(g);
  for (double& v : s.mom.comp[0]) v = 1.0;

  EulerConfig cfg = base_config(1.0, 2.0, 1.0);  // no forces configured

  // dt/eps = 1 halves the momentum
  const EulerState half = source_step(s, cfg, 1.0);
  for (double v : half.mom.comp[0]) CHECK(v == 0.5);
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    CHECK(half.rho.values[i] == s.rho.values[i]);

  // dt -> 0 leaves the state unchanged at first order
  const EulerState tiny = source_step(s, cfg, 1e-12);
  for (double v : tiny.mom.comp[0]) CHECK(v == doctest::Approx(1.0).epsilon(1e-11));

  // repeated steps follow the geometric decay exactly
  EulerState it = s;
  const double dt = 0.3;
  for (int k = 0; k < 25; ++k) it = source_step(it, cfg, dt);
  const double expect = std::pow(1.0 + dt / cfg.epsilon, -25.0);
  for (double v : it.mom.comp[0])
    CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("run: t_end = 0 returns the initial state only") {
  EulerConfig cfg = base_config(0.5, 2.0, 1.0);
  cfg.t_end = 0.0;
  const PeriodicGrid g = PeriodicGrid::make(1, 32, 1.0);
  ScalarField rho0(g);
  rho0.values.assign(32, 1.0);
  const EulerRunResult r = run_euler(cfg, rho0, VectorField(g));
  CHECK(r.snapshots.size() == 1);
  CHECK(r.total_steps == 0);
  CHECK(!r.aborted);
}

TEST_CASE("run: uniform rest state with no forces is stationary") {
  EulerConfig cfg = base_config(0.5, 2.0, 1.0);
  cfg.t_end = 0.3;
  const PeriodicGrid g = PeriodicGrid::make(1, 32, 1.0);
  ScalarField rho0(g);
  rho0.values.assign(32, 2.0);
  const EulerRunResult r = run_euler(cfg, rho0, VectorField(g));
  REQUIRE(!r.aborted);
  const EulerState& last = r.snapshots.back();
  for (double v : last.rho.values) CHECK(std::fabs(v - 2.0) <= 1e-12);
  for (double v : last.mom.comp[0]) CHECK(std::fabs(v) <= 1e-12);
}

TEST_CASE("run: far-from-stiff damping matches the discrete decay law") {
  // uniform density, uniform velocity, no forces: flux update is exact and
  // the momentum follows the semi-implicit decay factor per step
  EulerConfig cfg = base_config(50.0, 2.0, 1e-12);
  cfg.t_end = 1.0;
  const PeriodicGrid g = PeriodicGrid::make(1, 16, 1.0);
  ScalarField rho0(g);
  rho0.values.assign(16, 1.0);
  VectorField u0(g);
  for (double& v : u0.comp[0]) v = 0.7;
  const EulerRunResult r = run_euler(cfg, rho0, u0);
  REQUIRE(!r.aborted);
  double expect = 0.7;
  for (std::size_t i = 1; i < r.steps.size(); ++i) {
    const double gamma_half = 0.5 * r.steps[i].dt / cfg.epsilon;
    expect /= (1.0 + gamma_half) * (1.0 + gamma_half);
  }
  const double got = r.snapshots.back().mom.comp[0][0];
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("run: mass conservation and energy decay on a forced bump") {
  EulerConfig cfg = base_config(0.1, 2.0, 1.0);
  cfg.t_end = 0.05;
  cfg.c_k = 0.05;
  cfg.interaction = PotentialSpec::wrapped_gaussian(1.0, 0.2);
  cfg.confinement = PotentialSpec::cosine_mode(0.1, {1, 1, 1});
  cfg.snapshot_stride = 64;

  const PeriodicGrid g = PeriodicGrid::make(1, 256, 1.0);
  const ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
    return 1.0 + 0.4 * std::exp(-0.5 * x[0] * x[0] / (0.2 * 0.2));
  });
  const VectorField u0 =
      equilibrium_velocity(rho0, cfg.law, cfg.interaction, cfg.confinement, cfg.c_k);

  const EulerRunResult r = run_euler(cfg, rho0, u0);
  REQUIRE(!r.aborted);
  REQUIRE(r.total_steps > 10);

  const double m0 = r.steps.front().mass;
  for (const auto& row : r.steps)
    CHECK(std::fabs(row.mass - m0) <= 1e-12 * std::fabs(m0));

  const double slack = 1e-8 * std::fabs(r.steps.front().e_total);
  for (std::size_t i = 1; i < r.steps.size(); ++i)
    CHECK(r.steps[i].e_total <= r.steps[i - 1].e_total + slack);
}

TEST_CASE("run: energy-balance residual meets the bound at resolved dt") {
  // The splitting leaves an O(dt^2) defect in the per-step energy balance;
  // the 1e-6(1+|E|) bound needs dt below the CFL-limited step on this
  // scenario. Run tight cfl for the bound itself, then confirm the defect
  // shrinks like dt^2 as cfl halves.
  auto worst_ratio = [](double cfl) {
    EulerConfig cfg = base_config(0.1, 2.0, 1.0);
    cfg.t_end = 0.004;
    cfg.c_k = 0.05;
    cfg.cfl = cfl;
    cfg.interaction = PotentialSpec::wrapped_gaussian(1.0, 0.2);
    cfg.confinement = PotentialSpec::cosine_mode(0.1, {1, 1, 1});
    cfg.snapshot_stride = 1024;
    const PeriodicGrid g = PeriodicGrid::make(1, 256, 1.0);
    const ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
      return 1.0 + 0.4 * std::exp(-0.5 * x[0] * x[0] / (0.2 * 0.2));
    });
    const VectorField u0 = equilibrium_velocity(rho0, cfg.law, cfg.interaction,
                                                cfg.confinement, cfg.c_k);
    const EulerRunResult r = run_euler(cfg, rho0, u0);
    REQUIRE(!r.aborted);
    double worst = 0.0;
    for (std::size_t i = 1; i < r.steps.size(); ++i)
      worst = std::max(worst, r.steps[i].dissipation_residual /
                                  (1.0 + std::fabs(r.steps[i].e_total)));
    return worst;
  };

  CHECK(worst_ratio(0.05) <= 1e-6);

  const double r45 = worst_ratio(0.45);
  const double r225 = worst_ratio(0.225);
  CHECK(r225 <= 0.35 * r45);  // ~quadratic in dt
}

TEST_CASE("run: positivity loss aborts with the last valid snapshot") {
  EulerConfig cfg = base_config(1.0, 2.0, 1.0);
  cfg.t_end = 1.0;
  cfg.rho_floor = 0.65;  // dynamics dig the trough below this
  const PeriodicGrid g = PeriodicGrid::make(1, 64, 1.0);
  const ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
    return 1.0 + 0.3 * std::cos(M_PI * x[0]);
  });
  // outflow at the density trough
  VectorField u0(g);
  for (int i = 0; i < 64; ++i) u0.comp[0][i] = -std::sin(M_PI * g.center(i));
  const EulerRunResult r = run_euler(cfg, rho0, u0);
  CHECK(r.aborted);
  CHECK(!r.abort_reason.empty());
  REQUIRE(!r.snapshots.empty());
  CHECK(min_value(r.snapshots.back().rho) >= cfg.rho_floor);

  // a floor above the initial minimum is a usage error, not an abort
  cfg.rho_floor = 0.9;
  CHECK_THROWS_AS(run_euler(cfg, rho0, u0), std::invalid_argument);
}
