// test_subsolution.cpp
// Momentum decomposition exactness and idempotence, the mean-flow ODE
// against its closed form, eigenvalue arithmetic, the pointwise inequality
// over random draws and the admissibility margin on a constructed candidate.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "relaxhydro/convolve.hpp"
#include "relaxhydro/potential.hpp"
#include "relaxhydro/spectral.hpp"
#include "relaxhydro/subsolution.hpp"

using namespace relaxhydro;

TEST_CASE("decomposition: constant momentum") {
  const PeriodicGrid g = PeriodicGrid::make(2, 16, 1.0);
  VectorField mom(g);
  for (double& v : mom.comp[0]) v = 1.5;
  for (double& v : mom.comp[1]) v = -0.25;
  const MomentumParts parts = decompose_momentum(mom);
  CHECK(parts.mean[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(parts.mean[1] == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(max_abs(parts.potential) <= 1e-13);
  for (int a = 0; a < 2; ++a)
    for (double v : parts.solenoidal.comp[a]) CHECK(std::fabs(v) <= 1e-13);
}

TEST_CASE("decomposition: pure gradient momentum is recovered as potential") {
  const PeriodicGrid g = PeriodicGrid::make(2, 32, 1.0);
  const ScalarField psi = sample(g, [&](const std::array<double, 3>& x) {
    return std::sin(M_PI * x[0]) * std::cos(2.0 * M_PI * x[1]);
  });
  const VectorField mom = gradient(psi);
  const MomentumParts parts = decompose_momentum(mom);

  CHECK(std::fabs(parts.mean[0]) <= 1e-12);
  CHECK(std::fabs(parts.mean[1]) <= 1e-12);
  for (int a = 0; a < 2; ++a)
    for (double v : parts.solenoidal.comp[a]) CHECK(std::fabs(v) <= 1e-10);
  // potential recovered up to its (zero) mean
  double worst = 0.0;
  const double psi_mean = integrate(psi) / psi.grid.volume();
  for (std::size_t i = 0; i < psi.size(); ++i)
    worst = std::max(worst, std::fabs(parts.potential.values[i] -
                                      (psi.values[i] - psi_mean)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("decomposition: rotated gradient is recovered as solenoidal") {
  const PeriodicGrid g = PeriodicGrid::make(2, 32, 1.0);
  const ScalarField stream = sample(g, [&](const std::array<double, 3>& x) {
    return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
  });
  const VectorField gs = gradient(stream);
  VectorField mom(g);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    mom.comp[0][i] = gs.comp[1][i];
    mom.comp[1][i] = -gs.comp[0][i];
  }
  const MomentumParts parts = decompose_momentum(mom);
  CHECK(max_abs(parts.potential) <= 1e-10);
  CHECK(std::fabs(parts.mean[0]) <= 1e-12);
  double worst = 0.0;
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      worst = std::max(worst,
                       std::fabs(parts.solenoidal.comp[a][i] - mom.comp[a][i]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("decomposition: exact reconstruction, divergence-free part, idempotence") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const PeriodicGrid g = PeriodicGrid::make(2, 24, 1.0);
  VectorField mom(g);
  for (int a = 0; a < 2; ++a)
    for (double& v : mom.comp[a]) v = u(rng);

  const MomentumParts parts = decompose_momentum(mom);
  const VectorField gpsi = gradient(parts.potential);
  double recon = 0.0;
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      recon = std::max(recon,
                       std::fabs(parts.solenoidal.comp[a][i] + parts.mean[a] +
                                 gpsi.comp[a][i] - mom.comp[a][i]));
  CHECK(recon <= 1e-10);
  CHECK(max_abs(divergence(parts.solenoidal)) <= 1e-10);
  CHECK(std::fabs(integrate(parts.potential)) <= 1e-12);
  for (int a = 0; a < 2; ++a) {
    double mean = 0.0;
    for (double v : parts.solenoidal.comp[a]) mean += v;
    CHECK(std::fabs(mean / static_cast<double>(g.cell_count())) <= 1e-12);
  }

  // projections are idempotent
  const MomentumParts again = decompose_momentum(parts.solenoidal);
  double idem = std::max(std::fabs(again.mean[0]), std::fabs(again.mean[1]));
  idem = std::max(idem, max_abs(again.potential));
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      idem = std::max(idem, std::fabs(again.solenoidal.comp[a][i] -
                                      parts.solenoidal.comp[a][i]));
  CHECK(idem <= 1e-12);
}

TEST_CASE("mean-flow ODE: closed form, fixed point, long-time limit") {
  const std::array<double, 3> v0{2.0, -1.0, 0.0};
  {
    const std::vector<std::array<double, 3>> forcing(100, {0.0, 0.0, 0.0});
    const auto s = solve_mean_flow_ode(forcing, v0, 0.05, 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double f = std::exp(-0.05 * static_cast<double>(i));
      CHECK(std::fabs(s[i][0] - 2.0 * f) <= 1e-12);
      CHECK(std::fabs(s[i][1] + 1.0 * f) <= 1e-12);
    }
  }
  {
    const std::array<double, 3> G{0.7, 0.3, 0.0};
    const std::vector<std::array<double, 3>> forcing(50, G);
    const auto s = solve_mean_flow_ode(forcing, G, 0.1, 2);
    for (const auto& v : s) {
      CHECK(v[0] == doctest::Approx(0.7).epsilon(1e-14));
      CHECK(v[1] == doctest::Approx(0.3).epsilon(1e-14));
    }
    const auto far = solve_mean_flow_ode(
        std::vector<std::array<double, 3>>(400, G), v0, 0.05, 2);
    const double envelope = std::exp(-400 * 0.05);
    CHECK(std::fabs(far.back()[0] - 0.7) <=
          (std::fabs(v0[0] - 0.7) + 1e-9) * envelope + 1e-12);
  }
}

TEST_CASE("largest eigenvalue") {
  {
    const double eye[4] = {1.0, 0.0, 0.0, 1.0};
    CHECK(lambda_max(eye, 2) == doctest::Approx(1.0).epsilon(1e-14));
    const double diag[4] = {3.0, 0.0, 0.0, -1.0};
    CHECK(lambda_max(diag, 2) == doctest::Approx(3.0).epsilon(1e-14));
    const double rank1[4] = {1.0, 2.0, 2.0, 4.0};  // (1,2)x(1,2): eigenvalues 0, 5
    CHECK(lambda_max(rank1, 2) == doctest::Approx(5.0).epsilon(1e-13));
  }
  {
    // characteristic-polynomial oracle: eigenvalues of diag(1,2,3) + 0.5 J
    // computed here by bisection on det(A - t I)
    const double A[9] = {1.0, 0.5, 0.5, 0.5, 2.0, 0.5, 0.5, 0.5, 3.0};
    auto det = [&](double t) {
      const double a = A[0] - t, b = A[4] - t, c = A[8] - t;
      return a * (b * c - 0.25) - 0.5 * (0.5 * c - 0.25) + 0.5 * (0.25 - 0.5 * b);
    };
    double lo = 3.0, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (det(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    CHECK(lambda_max(A, 3) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
  }
  {
    const double skew[4] = {0.0, 1.0, -1.0, 0.0};
    CHECK_THROWS_AS(lambda_max(skew, 2), std::invalid_argument);
  }
}

TEST_CASE("pointwise eigenvalue inequality") {
  {
    const std::array<double, 3> M{1.0, 0.0, 0.0};
    const double H0[4] = {0.0, 0.0, 0.0, 0.0};
    CHECK(algebraic_inequality_margin(M, 2, 1.0, H0) ==
          doctest::Approx(0.5).epsilon(1e-13));
    const std::array<double, 3> Z{0.0, 0.0, 0.0};
    CHECK(algebraic_inequality_margin(Z, 2, 1.0, H0) ==
          doctest::Approx(0.0).epsilon(1e-13));
    CHECK_THROWS_AS(algebraic_inequality_margin(M, 2, -1.0, H0),
                    std::domain_error);
  }
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> um(-3.0, 3.0);
  std::uniform_real_distribution<double> ur(0.05, 20.0);
  double worst = 1e300;
  for (int d = 2; d <= 3; ++d) {
    for (int i = 0; i < 100'000; ++i) {
      std::array<double, 3> M{um(rng), um(rng), d == 3 ? um(rng) : 0.0};
      double H[9] = {0};
      if (d == 2) {
        const double a = um(rng), b = um(rng);
        H[0] = a; H[1] = b; H[2] = b; H[3] = -a;
      } else {
        const double a = um(rng), b = um(rng), c = um(rng), e = um(rng),
                     f = um(rng);
        H[0] = a; H[4] = b; H[8] = -a - b;
        H[1] = H[3] = c; H[2] = H[6] = e; H[5] = H[7] = f;
      }
      worst = std::min(worst, algebraic_inequality_margin(M, d, ur(rng), H));
    }
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("admissibility margin on a constructed candidate") {
  const PeriodicGrid g = PeriodicGrid::make(2, 24, 1.0);
  const EntropyLaw law = EntropyLaw::power_law(2.0, 1.0);

  const ScalarField rho = sample(g, [](const std::array<double, 3>& x) {
    return 1.0 + 0.3 * std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]);
  });
  // mass-compatible potential: solve the constraint for a decaying profile
  const ScalarField mean_free = sample(g, [](const std::array<double, 3>& x) {
    return -0.3 * std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]);
  });
  const ScalarField psi = spectral::solve_poisson_fd(scaled(-1.0, mean_free));
  const ScalarField psi_t = spectral::solve_poisson_fd(mean_free);

  const ScalarField stream = sample(g, [](const std::array<double, 3>& x) {
    return 0.4 * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
  });
  VectorField mom(g);
  {
    const VectorField gs = gradient(stream);
    const VectorField gpsi = gradient(psi);
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
      mom.comp[0][i] = gs.comp[1][i] + 0.2 + gpsi.comp[0][i];
      mom.comp[1][i] = -gs.comp[0][i] + gpsi.comp[1][i];
    }
  }
  const ScalarField kernel =
      PotentialSpec::wrapped_gaussian(0.5, 0.25).sample_kernel(g);
  const ScalarField phi =
      PotentialSpec::cosine_mode(0.2, {1, 1, 1}).sample_potential(g);

  SubsolutionFrame frame = build_frame(rho, mom, psi_t, 0.0, law, kernel, phi);
  CHECK(frame.correction.max_trace_abs() <= 1e-12);
  CHECK(max_abs(divergence(frame.v)) <= 1e-10);

  const SymTensorField F(g);
  const MarginField probe = x0_margin(frame, F, rho, law);
  CHECK(probe.pi_min > 0.0);

  // a huge gauge passes everywhere
  frame.pi_gauge = probe.pi_min * 10.0;
  CHECK(max_value(x0_margin(frame, F, rho, law).margin) < 0.0);

  // the computed minimal gauge passes, and 90% of it fails somewhere
  frame.pi_gauge = probe.pi_min;
  const MarginField at_min = x0_margin(frame, F, rho, law);
  CHECK(max_value(at_min.margin) < 0.0);
  frame.pi_gauge = 0.9 * probe.pi_min;
  const MarginField below = x0_margin(frame, F, rho, law);
  CHECK(max_value(below.margin) >= 0.0);

  // admissible cells obey the kinetic-energy bound that the pointwise
  // inequality converts the margin into
  frame.pi_gauge = probe.pi_min;
  const VectorField gpsi = gradient(frame.potential);
  std::vector<double> p(g.cell_count());
  law.fill_pressure(rho.data(), p.data(), g.cell_count());
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (at_min.margin.values[i] < 0.0) {
      double m2 = 0.0;
      for (int a = 0; a < 2; ++a) {
        const double ma =
            frame.v.comp[a][i] + frame.mean[a] + gpsi.comp[a][i];
        m2 += ma * ma;
      }
      const double bound = frame.pi_gauge -
                           1.0 * (p[i] + frame.potential_t.values[i]);
      CHECK(0.5 * m2 / rho.values[i] < bound + 1e-9);
    }
  }
}
