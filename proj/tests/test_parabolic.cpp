// test_parabolic.cpp
// Limit-equation integrator: conservation-form arithmetic, the discrete
// eigenmode decay oracle for the linear case, free-energy monotonicity and
// the velocity/defect reconstruction.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "relaxhydro/parabolic.hpp"
#include "relaxhydro/spectral.hpp"

using namespace relaxhydro;

namespace {

const PotentialSpec kNone = PotentialSpec::zero();

}  // namespace

TEST_CASE("rhs: uniform density with no forces is steady") {
  const PeriodicGrid g = PeriodicGrid::make(2, 24, 1.0);
  ScalarField rho(g);
  rho.values.assign(rho.size(), 1.3);
  const ScalarField rhs =
      diffusion_rhs(rho, EntropyLaw::power_law(2.0, 1.0), kNone, kNone, 0.0);
  CHECK(max_abs(rhs) == 0.0);
}

TEST_CASE("rhs integrates to zero (conservation form)") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int dim : {1, 2}) {
    const PeriodicGrid g = PeriodicGrid::make(dim, 32, 1.0);
    ScalarField rho(g);
    for (double& v : rho.values) v = u(rng);
    const ScalarField rhs = diffusion_rhs(
        rho, EntropyLaw::power_law(2.0, 1.0),
        PotentialSpec::wrapped_gaussian(0.7, 0.25),
        PotentialSpec::cosine_mode(0.2, {1, 1, 1}), 0.4);
    CHECK(std::fabs(integrate(rhs)) <= 1e-12 * (1.0 + max_abs(rhs)));
  }
}

TEST_CASE("rhs: quadratic law reduces to a laplacian of rho^2") {
  auto rhs_error = [](int n) {
    const PeriodicGrid g = PeriodicGrid::make(1, n, 1.0);
    const ScalarField rho = sample(g, [](const std::array<double, 3>& x) {
      return 1.0 + 0.3 * std::cos(M_PI * x[0]);
    });
    const ScalarField rhs =
        diffusion_rhs(rho, EntropyLaw::power_law(2.0, 1.0), kNone, kNone, 0.0);
    // analytic laplacian of rho^2 with rho = 1 + a cos(pi x)
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = g.center(i);
      const double a = 0.3, kx = M_PI;
      const double d2 =
          -2.0 * a * kx * kx * std::cos(kx * x) * (1.0 + a * std::cos(kx * x)) +
          2.0 * a * a * kx * kx * std::sin(kx * x) * std::sin(kx * x);
      err = std::max(err, std::fabs(rhs.values[i] - d2));
    }
    return err;
  };
  const double e64 = rhs_error(64);
  const double e128 = rhs_error(128);
  CHECK(std::log2(e64 / e128) >= 1.8);
}

TEST_CASE("run: uniform initial data stays put") {
  const PeriodicGrid g = PeriodicGrid::make(1, 32, 1.0);
  ScalarField rho(g);
  rho.values.assign(32, 0.8);
  const DiffusionRunResult r =
      run_diffusion(rho, EntropyLaw::power_law(2.0, 1.0), kNone, kNone, 0.0, 0.1, 8);
  REQUIRE(!r.aborted);
  for (double v : r.snapshots.back().rho_bar.values)
    CHECK(v == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("run: linear law follows the discrete eigenmode decay") {
  // m = 1 makes the equation linear in rho: a single cosine mode decays at
  // the rate of the centered-difference laplacian eigenvalue.
  const int n = 128;
  const PeriodicGrid g = PeriodicGrid::make(1, n, 1.0);
  const double L = g.half_width;
  const double amp = 0.01;
  const ScalarField rho0 = sample(g, [&](const std::array<double, 3>& x) {
    return 1.0 + amp * std::cos(M_PI * x[0] / L);
  });
  const double kx = M_PI / L;
  const double lam = std::pow(std::sin(kx * g.dx) / g.dx, 2.0);  // wide stencil
  const double t_end = 1.0 / lam;  // one e-fold
  const DiffusionRunResult r = run_diffusion(
      rho0, EntropyLaw::power_law(1.0, 1.0), kNone, kNone, 0.0, t_end, 16);
  REQUIRE(!r.aborted);

  // extract the mode amplitude by projection
  const ScalarField mode = sample(g, [&](const std::array<double, 3>& x) {
    return std::cos(M_PI * x[0] / L);
  });
  const double a_end =
      inner(r.snapshots.back().rho_bar, mode) / inner(mode, mode);
  const double expect = amp * std::exp(-lam * t_end);
  CHECK(a_end == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("run: mass conservation over many steps") {
  const PeriodicGrid g = PeriodicGrid::make(1, 64, 1.0);
  const ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
    return 1.0 + 0.4 * std::cos(M_PI * x[0]) + 0.1 * std::cos(2.0 * M_PI * x[0]);
  });
  const DiffusionRunResult r = run_diffusion(
      rho0, EntropyLaw::power_law(2.0, 1.0),
      PotentialSpec::wrapped_gaussian(0.6, 0.2),
      PotentialSpec::cosine_mode(0.1, {1, 1, 1}), 0.05, 0.2, 32);
  REQUIRE(!r.aborted);
  REQUIRE(r.total_steps >= 1000);
  const double m0 = integrate(r.snapshots.front().rho_bar);
  const double m1 = integrate(r.snapshots.back().rho_bar);
  CHECK(std::fabs(m1 - m0) <= 1e-10 * std::fabs(m0));
}

TEST_CASE("run: free energy is non-increasing") {
  const PeriodicGrid g = PeriodicGrid::make(1, 128, 1.0);
  const ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
    return 1.0 + 0.5 * std::exp(-0.5 * x[0] * x[0] / 0.04);
  });
  const DiffusionRunResult r = run_diffusion(
      rho0, EntropyLaw::power_law(2.0, 1.0),
      PotentialSpec::wrapped_gaussian(1.0, 0.2),
      PotentialSpec::cosine_mode(0.1, {1, 1, 1}), 0.05, 0.3, 16);
  REQUIRE(!r.aborted);
  const double slack = 1e-8 * std::fabs(r.free_energy.front());
  for (std::size_t i = 1; i < r.free_energy.size(); ++i)
    CHECK(r.free_energy[i] <= r.free_energy[i - 1] + slack);

  // dissipation rate matches int rho |u|^2 when sampled at a snapshot time:
  // centered-difference the energy series around the snapshot
  const std::size_t snap = r.snapshots.size() / 2;
  const double t_snap = r.snapshots[snap].t;
  std::size_t j = 1;
  while (j + 1 < r.energy_times.size() && r.energy_times[j] < t_snap) ++j;
  const double rate = -(r.free_energy[j + 1] - r.free_energy[j - 1]) /
                      (r.energy_times[j + 1] - r.energy_times[j - 1]);
  const VectorField u = equilibrium_velocity(
      r.snapshots[snap].rho_bar, EntropyLaw::power_law(2.0, 1.0),
      PotentialSpec::wrapped_gaussian(1.0, 0.2),
      PotentialSpec::cosine_mode(0.1, {1, 1, 1}), 0.05);
  ScalarField integrand(g);
  for (std::size_t i = 0; i < integrand.size(); ++i)
    integrand.values[i] =
        r.snapshots[snap].rho_bar.values[i] * u.comp[0][i] * u.comp[0][i];
  const double expect = integrate(integrand);
  CHECK(std::fabs(rate - expect) <= 0.10 * std::max(std::fabs(expect), 1e-12));
}

TEST_CASE("velocity reconstruction closed forms") {
  const PeriodicGrid g = PeriodicGrid::make(1, 64, 1.0);

  // uniform density, no potentials: everything vanishes
  {
    ScalarField rho(g);
    rho.values.assign(64, 1.0);
    const LimitVelocity lv = reconstruct_u_bar(
        {rho, 0.0}, EntropyLaw::power_law(2.0, 1.0), kNone, kNone, 0.0);
    CHECK(max_abs(divergence(lv.u_bar)) == 0.0);
    for (double v : lv.u_bar.comp[0]) CHECK(v == 0.0);
    CHECK(lv.e_bar_one_sided);
  }

  // uniform density, cosine confinement: u = -grad Phi exactly
  {
    ScalarField rho(g);
    rho.values.assign(64, 1.0);
    const PotentialSpec phi = PotentialSpec::cosine_mode(0.3, {1, 1, 1});
    const LimitVelocity lv = reconstruct_u_bar(
        {rho, 0.0}, EntropyLaw::power_law(2.0, 1.0), kNone, phi, 0.0);
    const VectorField gphi = gradient(phi.sample_potential(g));
    for (int i = 0; i < 64; ++i)
      CHECK(lv.u_bar.comp[0][i] == doctest::Approx(-gphi.comp[0][i]).epsilon(1e-14));
  }
}

TEST_CASE("near steady state the reconstructed velocity is small") {
  const PeriodicGrid g = PeriodicGrid::make(1, 64, 1.0);
  const PotentialSpec phi = PotentialSpec::cosine_mode(0.05, {1, 1, 1});
  const EntropyLaw law = EntropyLaw::power_law(2.0, 1.0);
  const ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
    return 1.0 + 0.2 * std::cos(M_PI * x[0]);
  });
  const DiffusionRunResult r = run_diffusion(rho0, law, kNone, phi, 0.0, 3.0, 8);
  REQUIRE(!r.aborted);
  const LimitVelocity lv =
      reconstruct_u_bar(r.snapshots.back(), law, kNone, phi, 0.0);
  double vmax = 0.0;
  for (double v : lv.u_bar.comp[0]) vmax = std::max(vmax, std::fabs(v));
  CHECK(vmax <= 5e-4);  // long-run fixed point of the gradient flow
}

TEST_CASE("defect reconstruction shrinks under refinement near equilibrium") {
  auto defect_max = [](int n) {
    const PeriodicGrid g = PeriodicGrid::make(1, n, 1.0);
    const PotentialSpec phi = PotentialSpec::cosine_mode(0.05, {1, 1, 1});
    const EntropyLaw law = EntropyLaw::power_law(2.0, 1.0);
    // start already close to the continuum equilibrium of this potential
    const ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
      return 1.0 - 0.025 * std::cos(M_PI * x[0]);
    });
    const DiffusionRunResult r = run_diffusion(rho0, law, kNone, phi, 0.0, 1.0, 16);
    REQUIRE(!r.aborted);
    const auto lvs = reconstruct_limit_velocities(r, law, kNone, phi, 0.0);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < lvs.size(); ++i) {
      CHECK(!lvs[i].e_bar_one_sided);
      for (double v : lvs[i].e_bar.comp[0]) worst = std::max(worst, std::fabs(v));
    }
    CHECK(lvs.front().e_bar_one_sided);
    CHECK(lvs.back().e_bar_one_sided);
    return worst;
  };
  const double d32 = defect_max(32);
  const double d64 = defect_max(64);
  CHECK(d64 < d32 / 2.0);
}
