// entropy.cpp

#include "relaxhydro/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace relaxhydro {

namespace {

void require_density(double rho) {
  if (!std::isfinite(rho) || rho < 0.0)
    throw std::domain_error("density must be finite and nonnegative");
}

void require_positive_density(double rho) {
  if (!std::isfinite(rho) || rho <= 0.0)
    throw std::domain_error("density must be finite and positive");
}

std::vector<double> linspace(Interval iv, std::size_t n) {
  if (n <= 1 || iv.hi == iv.lo) return {iv.lo};
  std::vector<double> out(n);
  const double step = (iv.hi - iv.lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = iv.lo + step * static_cast<double>(i);
  out.back() = iv.hi;
  return out;
}

// Rounding can push an algebraically zero margin a few ulp negative; collapse
// those to zero so equality cases certify cleanly.
double collapse_fp_dust(double margin, double scale) {
  const double slack = 1e-12 * (1.0 + scale);
  return (margin < 0.0 && margin > -slack) ? 0.0 : margin;
}

}  // namespace

EntropyLaw::EntropyLaw(double m, double k, EntropyTail tail, double A)
    : m_(m), k_(k), tail_(std::move(tail)), A_(A) {}

EntropyLaw EntropyLaw::power_law(double m, double k) {
  if (!(m >= 1.0) || !std::isfinite(m))
    throw std::invalid_argument("entropy exponent must satisfy m >= 1");
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("entropy coefficient must be positive");
  return EntropyLaw(m, k, EntropyTail{}, m > 1.0 ? m - 1.0 : 1.0);
}

EntropyLaw EntropyLaw::power_law_with_tail(double m, double k, EntropyTail tail,
                                           double A) {
  if (!(m > 2.0)) throw std::invalid_argument("tail perturbations require m > 2");
  if (!(k > 0.0)) throw std::invalid_argument("entropy coefficient must be positive");
  if (!(A > 0.0)) throw std::invalid_argument("tail bound constant must be positive");
  if (!tail.value || !tail.d1 || !tail.d2)
    throw std::invalid_argument("tail descriptor must supply value, d1 and d2");
  return EntropyLaw(m, k, std::move(tail), A);
}

double EntropyLaw::h(double rho) const {
  require_density(rho);
  if (rho == 0.0) return 0.0;  // continuous extension; rho log rho -> 0
  if (m_ == 1.0) return k_ * rho * std::log(rho);
  double v = k_ / (m_ - 1.0) * std::pow(rho, m_);
  if (has_tail()) v += tail_.value(rho);
  return v;
}

double EntropyLaw::h_prime(double rho) const {
  require_positive_density(rho);
  if (m_ == 1.0) return k_ * (std::log(rho) + 1.0);
  double v = k_ * m_ / (m_ - 1.0) * std::pow(rho, m_ - 1.0);
  if (has_tail()) v += tail_.d1(rho);
  return v;
}

double EntropyLaw::h_second(double rho) const {
  require_positive_density(rho);
  if (m_ == 1.0) return k_ / rho;
  double v = k_ * m_ * std::pow(rho, m_ - 2.0);
  if (has_tail()) v += tail_.d2(rho);
  return v;
}

double EntropyLaw::pressure(double rho) const {
  require_density(rho);
  if (rho == 0.0) return 0.0;
  if (m_ == 1.0) return k_ * rho;
  // p = rho h' - h
  double v = k_ * std::pow(rho, m_);
  if (has_tail()) v += rho * tail_.d1(rho) - tail_.value(rho);
  return v;
}

double EntropyLaw::pressure_prime(double rho) const {
  require_density(rho);
  if (m_ == 1.0) return k_;
  if (rho == 0.0) return 0.0;  // k m rho^{m-1} -> 0 for m > 1
  // p' = rho h''
  double v = k_ * m_ * std::pow(rho, m_ - 1.0);
  if (has_tail()) v += rho * tail_.d2(rho);
  return v;
}

double EntropyLaw::pressure_second(double rho) const {
  require_positive_density(rho);
  if (m_ == 1.0) return 0.0;
  if (!has_tail()) return k_ * m_ * (m_ - 1.0) * std::pow(rho, m_ - 2.0);
  // p'' = h'' + rho h''' needs the tail's third derivative; fall back to a
  // centered difference of p' at a relative step.
  const double step = 1e-6 * std::max(rho, 1.0);
  const double lo = std::max(rho - step, 0.5 * rho);
  const double hi = rho + step;
  return (pressure_prime(hi) - pressure_prime(lo)) / (hi - lo);
}

double EntropyLaw::relative_entropy(double rho, double rho_bar) const {
  require_density(rho);
  if (!std::isfinite(rho_bar) || rho_bar <= 0.0)
    throw std::domain_error("reference density must be positive");
  const double v = h(rho) - h(rho_bar) - h_prime(rho_bar) * (rho - rho_bar);
  return v < 0.0 ? 0.0 : v;  // convexity: negatives are rounding dust
}

double EntropyLaw::relative_pressure(double rho, double rho_bar) const {
  require_density(rho);
  if (!std::isfinite(rho_bar) || rho_bar <= 0.0)
    throw std::domain_error("reference density must be positive");
  return pressure(rho) - pressure(rho_bar) -
         pressure_prime(rho_bar) * (rho - rho_bar);
}

void EntropyLaw::fill_h(const double* rho, double* out, std::size_t n) const {
  if (m_ == 1.0) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = rho[i] == 0.0 ? 0.0 : k_ * rho[i] * std::log(rho[i]);
    return;
  }
  if (m_ == 2.0 && !has_tail()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = k_ * rho[i] * rho[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = h(rho[i]);
}

void EntropyLaw::fill_h_prime(const double* rho, double* out, std::size_t n) const {
  if (m_ == 2.0 && !has_tail()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * k_ * rho[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = h_prime(rho[i]);
}

void EntropyLaw::fill_pressure(const double* rho, double* out, std::size_t n) const {
  if (m_ == 1.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = k_ * rho[i];
    return;
  }
  if (m_ == 2.0 && !has_tail()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = k_ * rho[i] * rho[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = pressure(rho[i]);
}

void EntropyLaw::fill_pressure_prime(const double* rho, double* out,
                                     std::size_t n) const {
  if (m_ == 1.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = k_;
    return;
  }
  if (m_ == 2.0 && !has_tail()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * k_ * rho[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = pressure_prime(rho[i]);
}

BoundCertificate certify_bounds(const EntropyLaw& law, Interval rho_range,
                                Interval rho_bar_range, std::size_t n_samples) {
  if (!(rho_range.lo > 0.0) || !(rho_range.hi >= rho_range.lo))
    throw std::domain_error("rho range must lie in (0, inf)");
  if (!(rho_bar_range.lo > 0.0) || !(rho_bar_range.hi >= rho_bar_range.lo))
    throw std::domain_error("rho_bar range must lie in (0, inf)");
  if (n_samples == 0) throw std::domain_error("need at least one sample");

  const std::size_t per_axis = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_samples)))));
  const std::vector<double> rhos = linspace(rho_range, per_axis);
  const std::vector<double> rho_bars = linspace(rho_bar_range, per_axis);
  const double m = law.exponent();
  const double k = law.coefficient();

  BoundCertificate cert;
  cert.samples_checked = rhos.size() * rho_bars.size();
  double worst = std::numeric_limits<double>::infinity();
  bool ok = true;

  if (m <= 2.0) {
    for (double rb : rho_bars) {
      for (double r : rhos) {
        const double lhs = law.relative_entropy(r, rb);
        const double d = r - rb;
        const double rhs = (m == 1.0)
                               ? 0.5 * k * std::min(1.0 / r, 1.0 / rb) * d * d
                               : 0.5 * k * m *
                                     std::min(std::pow(r, m - 2.0),
                                              std::pow(rb, m - 2.0)) *
                                     d * d;
        const double margin = collapse_fp_dust(lhs - rhs, lhs + rhs);
        worst = std::min(worst, margin);
        if (margin < 0.0) ok = false;
      }
    }
    cert.regime = (m == 1.0) ? "quadratic-bound(m=1)" : "quadratic-bound(1<m<=2)";
    cert.C1 = (m == 1.0) ? 0.5 * k : 0.5 * k * m;
  }

  if (m > 1.0) {
    // Two-regime search on the compact rho_bar interval: grid candidates for
    // the threshold R0, then constants as sampled infima minus a 1% margin.
    std::vector<double> candidates;
    for (double r : rhos)
      if (r > rho_bar_range.hi) candidates.push_back(r);
    if (candidates.empty()) candidates.push_back(rho_range.hi);

    const double eq_tol = 1e-12;
    double best_score = -1.0;
    double best_r0 = 0.0, best_c1 = 0.0, best_c2 = 0.0;
    bool best_has_upper = false;
    std::size_t informative_pairs = 0;
    for (double r0 : candidates) {
      double c1 = std::numeric_limits<double>::infinity();
      double c2 = std::numeric_limits<double>::infinity();
      bool has_upper = false;
      std::size_t informative = 0;
      for (double rb : rho_bars) {
        for (double r : rhos) {
          const double d = std::fabs(r - rb);
          if (d <= eq_tol * (1.0 + r)) continue;
          ++informative;
          const double lhs = law.relative_entropy(r, rb);
          if (r <= r0)
            c1 = std::min(c1, lhs / (d * d));
          else {
            has_upper = true;
            c2 = std::min(c2, lhs / std::pow(d, m));
          }
        }
      }
      informative_pairs = std::max(informative_pairs, informative);
      if (!(c1 > 0.0) || !std::isfinite(c1)) continue;
      if (has_upper && !(c2 > 0.0)) continue;
      const double score = has_upper ? std::min(c1, c2) : c1;
      if (score > best_score) {
        best_score = score;
        best_r0 = r0;
        best_c1 = c1;
        best_c2 = has_upper ? c2 : c1;
        best_has_upper = has_upper;
      }
    }

    if (informative_pairs == 0) {
      // every sampled pair sits on the diagonal; both sides of the bound
      // vanish and there is nothing to search
      cert.regime += cert.regime.empty() ? "degenerate-samples"
                                         : "+degenerate-samples";
      cert.worst_margin =
          worst == std::numeric_limits<double>::infinity() ? 0.0 : worst;
      cert.passed = ok;
      return cert;
    }
    if (best_score < 0.0) {
      cert.passed = false;
      cert.failure =
          "no admissible (C1, C2) found at the requested sample density";
      cert.worst_margin = worst == std::numeric_limits<double>::infinity()
                              ? 0.0
                              : std::min(worst, 0.0);
      return cert;
    }

    cert.R0 = best_r0;
    cert.C1 = 0.99 * best_c1;
    cert.C2 = 0.99 * best_c2;
    cert.regime += cert.regime.empty() ? "two-regime-search" : "+two-regime-search";
    if (!best_has_upper) cert.regime += "(upper regime unsampled)";

    for (double rb : rho_bars) {
      for (double r : rhos) {
        const double lhs = law.relative_entropy(r, rb);
        const double d = std::fabs(r - rb);
        const double rhs = (r <= cert.R0) ? cert.C1 * d * d
                                          : cert.C2 * std::pow(d, m);
        const double margin = collapse_fp_dust(lhs - rhs, lhs + rhs);
        worst = std::min(worst, margin);
        if (margin < 0.0) ok = false;
      }
    }
  }

  cert.worst_margin = worst;
  cert.passed = ok;
  if (!ok) cert.failure = "sampled lower bound violated";
  return cert;
}

double pressure_tail_bound_margin(const EntropyLaw& law, Interval rho_range,
                                  std::size_t n_samples) {
  if (!(rho_range.lo > 0.0)) throw std::domain_error("rho range must lie in (0, inf)");
  const double A = law.tail_bound_constant();
  double worst = std::numeric_limits<double>::infinity();
  for (double r : linspace(rho_range, std::max<std::size_t>(1, n_samples))) {
    const double lhs = A * law.pressure_prime(r) / r;
    const double rhs = std::fabs(law.pressure_second(r));
    worst = std::min(worst, collapse_fp_dust(lhs - rhs, lhs + rhs));
  }
  return worst;
}

double relative_pressure_constant(const EntropyLaw& law, Interval rho_range,
                                  Interval rho_bar_range,
                                  std::size_t n_samples) {
  const std::size_t per_axis = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_samples)))));
  double sup = 0.0;
  for (double rb : linspace(rho_bar_range, per_axis)) {
    for (double r : linspace(rho_range, per_axis)) {
      const double hrel = law.relative_entropy(r, rb);
      if (hrel <= 1e-14 * (1.0 + std::fabs(law.h(r)))) continue;
      sup = std::max(sup, std::fabs(law.relative_pressure(r, rb)) / hrel);
    }
  }
  return sup;
}

}  // namespace relaxhydro
