// test_entropy.cpp
// Oracles for the internal-energy / pressure family: closed-form values,
// thermodynamic identities by finite differences, convexity properties over
// random samples and the bound certificates.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "relaxhydro/entropy.hpp"

using relaxhydro::BoundCertificate;
using relaxhydro::EntropyLaw;
using relaxhydro::EntropyTail;
using relaxhydro::Interval;

TEST_CASE("internal energy closed forms") {
  const EntropyLaw log_law = EntropyLaw::power_law(1.0, 1.0);
  const EntropyLaw quad = EntropyLaw::power_law(2.0, 1.0);

  const double e = std::exp(1.0);
  CHECK(log_law.h(e) == doctest::Approx(e).epsilon(1e-14));  // e ln e = e
  CHECK(quad.h(3.0) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(log_law.h(1.0) == 0.0);
  CHECK(log_law.h(0.0) == 0.0);  // continuous extension of rho log rho
  CHECK(quad.h(0.0) == 0.0);

  CHECK_THROWS_AS((void)quad.h(-1.0), std::domain_error);
  CHECK_THROWS_AS((void)quad.h(std::nan("")), std::domain_error);
  CHECK_THROWS_AS((void)quad.relative_entropy(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)quad.relative_entropy(1.0, -2.0), std::domain_error);
}

TEST_CASE("pressure closed forms and the defining identity") {
  // oracle: p = rho h' - h with h = 2 rho^1.5 for m = 1.5, k = 1
  const EntropyLaw p15 = EntropyLaw::power_law(1.5, 1.0);
  const double rho = 4.0;
  const double h = 2.0 * std::pow(rho, 1.5);
  const double hp = 3.0 * std::sqrt(rho);
  CHECK(p15.pressure(rho) == doctest::Approx(rho * hp - h).epsilon(1e-14));
  CHECK(p15.pressure(rho) == doctest::Approx(8.0).epsilon(1e-14));

  const EntropyLaw log_law = EntropyLaw::power_law(1.0, 1.0);
  // oracle: rho h' - h with h = rho ln rho gives k rho
  const double r5 = 5.0;
  CHECK(log_law.pressure(r5) ==
        doctest::Approx(r5 * (std::log(r5) + 1.0) - r5 * std::log(r5))
            .epsilon(1e-14));
  CHECK(log_law.pressure(r5) == doctest::Approx(5.0).epsilon(1e-14));

  for (double m : {1.0, 1.3, 2.0, 2.7}) {
    const EntropyLaw law = EntropyLaw::power_law(m, 0.8);
    CHECK(law.pressure(0.0) == 0.0);
  }
}

TEST_CASE("thermodynamic consistency: rho h'' = p' and rho h' = p + h") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (double m : {1.0, 1.4, 2.0, 3.2}) {
    const EntropyLaw law = EntropyLaw::power_law(m, 1.7);
    for (int i = 0; i < 200; ++i) {
      const double rho = u(rng);
      const double lhs1 = rho * law.h_second(rho);
      const double rhs1 = law.pressure_prime(rho);
      CHECK(std::fabs(lhs1 - rhs1) <= 1e-10 * (1.0 + std::fabs(rhs1)));
      const double lhs2 = rho * law.h_prime(rho);
      const double rhs2 = law.pressure(rho) + law.h(rho);
      CHECK(std::fabs(lhs2 - rhs2) <= 1e-10 * (1.0 + std::fabs(rhs2)));
    }
  }
}

TEST_CASE("finite-difference pressure derivative matches rho h''") {
  const double step = 1e-5;
  for (double m : {1.0, 1.5, 2.0, 2.5}) {
    const EntropyLaw law = EntropyLaw::power_law(m, 1.0);
    for (double rho = 0.1; rho <= 10.0; rho += 0.37) {
      const double fd =
          (law.pressure(rho + step) - law.pressure(rho - step)) / (2.0 * step);
      const double exact = rho * law.h_second(rho);
      CHECK(std::fabs(fd - exact) <= 1e-6 * std::max(1.0, std::fabs(exact)));
    }
  }
}

TEST_CASE("relative entropy values and properties") {
  const EntropyLaw quad = EntropyLaw::power_law(2.0, 1.0);
  CHECK(quad.relative_entropy(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  const EntropyLaw log_law = EntropyLaw::power_law(1.0, 1.0);
  const double e = std::exp(1.0);
  // e ln e - 1 ln 1 - (ln 1 + 1)(e - 1) = 1
  CHECK(log_law.relative_entropy(e, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  const EntropyLaw p17 = EntropyLaw::power_law(1.7, 2.0);
  CHECK(p17.relative_entropy(0.7, 0.7) == 0.0);

  // convexity: nonnegative, zero iff arguments match
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(1e-6, 10.0);
  for (double m : {1.0, 1.5, 2.0, 3.0}) {
    const EntropyLaw law = EntropyLaw::power_law(m, 1.0);
    for (int i = 0; i < 10'000; ++i) {
      const double rho = u(rng), rb = u(rng);
      const double v = law.relative_entropy(rho, rb);
      CHECK(v >= 0.0);
      if (std::fabs(rho - rb) > 1e-14 * (1.0 + rho))
        CHECK(v > 0.0);
    }
    CHECK(law.relative_entropy(1.2345, 1.2345) == 0.0);
  }
}

TEST_CASE("relative pressure: linear law vanishes, power identity") {
  const EntropyLaw log_law = EntropyLaw::power_law(1.0, 1.0);
  CHECK(log_law.relative_pressure(3.0, 1.0) == 0.0);

  const EntropyLaw quad = EntropyLaw::power_law(2.0, 1.0);
  CHECK(quad.relative_pressure(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  const EntropyLaw p15 = EntropyLaw::power_law(1.5, 1.0);
  CHECK(p15.relative_pressure(2.0, 2.0) == 0.0);

  // p(rho|rb) = (m-1) h(rho|rb) for tail-free 1 < m <= 2
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 9.0);
  for (double m : {1.2, 1.5, 1.9, 2.0}) {
    const EntropyLaw law = EntropyLaw::power_law(m, 1.3);
    for (int i = 0; i < 5000; ++i) {
      const double rho = u(rng), rb = u(rng);
      const double lhs = law.relative_pressure(rho, rb);
      const double rhs = (m - 1.0) * law.relative_entropy(rho, rb);
      // tolerance sits above the cancellation floor of the Bregman formula
      const double scale = std::fabs(law.pressure(rho)) + std::fabs(law.pressure(rb));
      CHECK(std::fabs(lhs - rhs) <=
            1e-12 * std::max(std::fabs(lhs), std::fabs(rhs)) + 1e-14 * (1.0 + scale));
    }
  }
}

TEST_CASE("quadratic lower bounds over random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1e-4, 10.0);
  {
    const EntropyLaw law = EntropyLaw::power_law(1.0, 1.0);
    for (int i = 0; i < 10'000; ++i) {
      const double rho = u(rng), rb = u(rng);
      const double lhs = law.relative_entropy(rho, rb);
      const double rhs =
          0.5 * std::min(1.0 / rho, 1.0 / rb) * (rho - rb) * (rho - rb);
      CHECK(lhs - rhs >= -1e-12 * (1.0 + lhs + rhs));
    }
  }
  for (double m : {1.3, 1.8, 2.0}) {
    const EntropyLaw law = EntropyLaw::power_law(m, 1.0);
    for (int i = 0; i < 10'000; ++i) {
      const double rho = u(rng), rb = u(rng);
      const double lhs = law.relative_entropy(rho, rb);
      const double rhs = 0.5 * m *
                         std::min(std::pow(rho, m - 2.0), std::pow(rb, m - 2.0)) *
                         (rho - rb) * (rho - rb);
      CHECK(lhs - rhs >= -1e-12 * (1.0 + lhs + rhs));
    }
  }
}

TEST_CASE("bound certificates") {
  // single-sample certificate: margin = 2 ln 2 - 1 - 0.25
  const EntropyLaw log_law = EntropyLaw::power_law(1.0, 1.0);
  const BoundCertificate single =
      certify_bounds(log_law, {2.0, 2.0}, {1.0, 1.0}, 1);
  CHECK(single.passed);
  CHECK(single.samples_checked == 1);
  CHECK(single.worst_margin ==
        doctest::Approx(2.0 * std::log(2.0) - 1.25).epsilon(1e-12));

  const EntropyLaw quad = EntropyLaw::power_law(2.0, 1.0);
  const BoundCertificate c2 = certify_bounds(quad, {0.1, 8.0}, {0.5, 2.0}, 2000);
  CHECK(c2.passed);
  CHECK(c2.worst_margin >= 0.0);
  CHECK(c2.C1 > 0.0);
  CHECK(c2.R0 > 2.0);  // threshold beyond the reference interval

  // identity samples: both sides vanish
  const BoundCertificate ident = certify_bounds(quad, {1.0, 1.0}, {1.0, 1.0}, 1);
  CHECK(ident.passed);
  CHECK(ident.worst_margin == 0.0);

  // steep law: two-regime search must find positive constants
  const EntropyLaw steep = EntropyLaw::power_law(3.0, 1.0);
  const BoundCertificate c3 = certify_bounds(steep, {0.05, 12.0}, {0.5, 2.0}, 4000);
  CHECK(c3.passed);
  CHECK(c3.C1 > 0.0);
  CHECK(c3.C2 > 0.0);
  CHECK(c3.worst_margin >= 0.0);

  CHECK_THROWS_AS(certify_bounds(quad, {0.0, 1.0}, {1.0, 2.0}, 10),
                  std::domain_error);
}

TEST_CASE("pressure curvature bound for the steep family") {
  // pure power law: |p''| = (m-1) p'/rho exactly, so the default constant
  // m-1 certifies with zero margin
  for (double m : {2.5, 3.0, 4.0}) {
    const EntropyLaw law = EntropyLaw::power_law(m, 1.0);
    CHECK(law.tail_bound_constant() == doctest::Approx(m - 1.0));
    CHECK(relaxhydro::pressure_tail_bound_margin(law, {0.1, 10.0}, 1000) >= 0.0);
  }
}

TEST_CASE("tailed law stays thermodynamically consistent") {
  // tail c rho^2 with c small: o(rho^m) for m = 3, convexity preserved
  const double c = 0.05;
  EntropyTail tail;
  tail.value = [c](double r) { return c * r * r; };
  tail.d1 = [c](double r) { return 2.0 * c * r; };
  tail.d2 = [c](double) { return 2.0 * c; };
  const EntropyLaw law = EntropyLaw::power_law_with_tail(3.0, 1.0, tail, 2.5);

  for (double rho = 0.2; rho <= 5.0; rho += 0.3) {
    CHECK(law.h_second(rho) > 0.0);
    const double lhs1 = rho * law.h_second(rho);
    CHECK(std::fabs(lhs1 - law.pressure_prime(rho)) <=
          1e-10 * (1.0 + std::fabs(lhs1)));
    const double lhs2 = rho * law.h_prime(rho);
    CHECK(std::fabs(lhs2 - law.pressure(rho) - law.h(rho)) <=
          1e-10 * (1.0 + std::fabs(lhs2)));
    // FD fallback for p'' stays close to the exact 6 k rho + 2 c
    const double exact = 6.0 * rho + 2.0 * c;
    CHECK(law.pressure_second(rho) ==
          doctest::Approx(exact).epsilon(1e-5));
  }

  const double cst = relaxhydro::relative_pressure_constant(
      law, {0.1, 6.0}, {0.5, 2.0}, 4000);
  CHECK(cst > 0.0);
  CHECK(std::isfinite(cst));
}

TEST_CASE("relative pressure constant equals m-1 for the flat family") {
  const EntropyLaw law = EntropyLaw::power_law(1.6, 1.0);
  const double cst =
      relaxhydro::relative_pressure_constant(law, {0.1, 8.0}, {0.4, 2.5}, 4000);
  CHECK(cst == doctest::Approx(0.6).epsilon(1e-9));
}
