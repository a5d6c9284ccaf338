// entropy.hpp
// Convex internal-energy / pressure law family. The law is parameterized by
// an exponent m >= 1 and a positive coefficient:
//
//   h(rho) = k rho log rho                 (m = 1)
//   h(rho) = k/(m-1) rho^m                 (m > 1, optional smooth tail)
//
// with the pressure tied to h through rho h''(rho) = p'(rho) and
// rho h'(rho) = p(rho) + h(rho), which gives p = k rho (m = 1) and
// p = k rho^m (m > 1) for the tail-free family. Relative (Bregman)
// quantities h(rho|rho_bar) and p(rho|rho_bar) and sampled lower-bound
// certificates live here as well.

#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace relaxhydro {

// Optional smooth perturbation added to the m > 2 power law. Supplies the
// perturbation and its first two derivatives on (0, inf); must vanish at 0
// and stay o(rho^m) at infinity for the law to remain admissible.
struct EntropyTail {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

class EntropyLaw {
 public:
  static EntropyLaw power_law(double m, double k);
  // m must exceed 2; A is the constant in |p''| <= A p'/rho.
  static EntropyLaw power_law_with_tail(double m, double k, EntropyTail tail,
                                        double A);

  double exponent() const { return m_; }
  double coefficient() const { return k_; }
  bool has_tail() const { return static_cast<bool>(tail_.value); }
  // Constant of the |p''| <= A p'/rho bound (m > 2); equals m-1 for the pure
  // power law, where the bound is an identity.
  double tail_bound_constant() const { return A_; }

  double h(double rho) const;             // rho >= 0; h(0) = 0 by continuity
  double h_prime(double rho) const;       // rho > 0
  double h_second(double rho) const;      // rho > 0
  double pressure(double rho) const;      // rho >= 0; p(0) = 0
  double pressure_prime(double rho) const;   // rho >= 0
  double pressure_second(double rho) const;  // rho > 0; FD fallback with tail

  // h(rho|rho_bar) = h(rho) - h(rho_bar) - h'(rho_bar)(rho - rho_bar) >= 0.
  double relative_entropy(double rho, double rho_bar) const;
  // p(rho|rho_bar), signed.
  double relative_pressure(double rho, double rho_bar) const;

  // Array fills for the solver loops (m = 1 and m = 2 avoid pow).
  void fill_h(const double* rho, double* out, std::size_t n) const;
  void fill_h_prime(const double* rho, double* out, std::size_t n) const;
  void fill_pressure(const double* rho, double* out, std::size_t n) const;
  void fill_pressure_prime(const double* rho, double* out, std::size_t n) const;

 private:
  EntropyLaw(double m, double k, EntropyTail tail, double A);
  double m_ = 2.0;
  double k_ = 1.0;
  EntropyTail tail_;
  double A_ = 1.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Sampled lower-bound certificate for the relative entropy:
// quadratic bounds for m <= 2, and for m > 1 on a compact rho_bar interval a
// searched (R0, C1, C2) pair with h(rho|rho_bar) >= C1|rho-rho_bar|^2 below
// R0 and >= C2|rho-rho_bar|^m above it.
struct BoundCertificate {
  std::string regime;
  double R0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  std::size_t samples_checked = 0;
  double worst_margin = 0.0;  // >= 0 for a passing certificate
  bool passed = false;
  std::string failure;  // empty when passed
};

// Samples rho_range x rho_bar_range on a uniform lattice (about
// sqrt(n_samples) points per axis) and checks/searches the bounds above.
// A failed search returns passed = false with a report, never throws for
// search failures; invalid ranges throw std::domain_error.
BoundCertificate certify_bounds(const EntropyLaw& law, Interval rho_range,
                                Interval rho_bar_range, std::size_t n_samples);

// Worst margin of A p'(rho)/rho - |p''(rho)| over uniform samples (m > 2
// family; for the pure power law the two sides agree identically).
double pressure_tail_bound_margin(const EntropyLaw& law, Interval rho_range,
                                  std::size_t n_samples);

// Empirical constant sup |p(rho|rho_bar)| / h(rho|rho_bar) over samples;
// equals m-1 exactly for tail-free 1 < m <= 2.
double relative_pressure_constant(const EntropyLaw& law, Interval rho_range,
                                  Interval rho_bar_range, std::size_t n_samples);

}  // namespace relaxhydro
