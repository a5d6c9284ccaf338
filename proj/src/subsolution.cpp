// subsolution.cpp

#include "relaxhydro/subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaxhydro/convolve.hpp"
#include "relaxhydro/kernels.hpp"
#include "relaxhydro/spectral.hpp"

namespace relaxhydro {

namespace {

const kernels::Backend& kn() { return kernels::active(); }

double sym2_lambda_max(double a, double b, double c) {
  // [[a, b], [b, c]]
  const double mean = 0.5 * (a + c);
  const double off = 0.5 * (a - c);
  return mean + std::hypot(off, b);
}

// Symmetric 3x3 largest eigenvalue: trigonometric closed form plus two
// Newton polish steps on det(lambda I - A).
double sym3_lambda_max(const double a[3][3]) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double tr = a[0][0] + a[1][1] + a[2][2];
  double lmax;
  if (p1 == 0.0) {
    lmax = std::max({a[0][0], a[1][1], a[2][2]});
  } else {
    const double q = tr / 3.0;
    const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                      (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    double b[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
    const double detb =
        b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[1][2]) -
        b[0][1] * (b[0][1] * b[2][2] - b[1][2] * b[0][2]) +
        b[0][2] * (b[0][1] * b[1][2] - b[1][1] * b[0][2]);
    const double r = std::clamp(0.5 * detb, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    lmax = q + 2.0 * p * std::cos(phi);
  }
  // char poly: lambda^3 - tr lambda^2 + m2 lambda - det
  const double m2 = a[0][0] * a[1][1] - a[0][1] * a[0][1] + a[0][0] * a[2][2] -
                    a[0][2] * a[0][2] + a[1][1] * a[2][2] - a[1][2] * a[1][2];
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[1][2]) -
                     a[0][1] * (a[0][1] * a[2][2] - a[1][2] * a[0][2]) +
                     a[0][2] * (a[0][1] * a[1][2] - a[1][1] * a[0][2]);
  for (int it = 0; it < 2; ++it) {
    const double f = ((lmax - tr) * lmax + m2) * lmax - det;
    const double fp = (3.0 * lmax - 2.0 * tr) * lmax + m2;
    if (fp != 0.0) lmax -= f / fp;
  }
  return lmax;
}

double lambda_max_packed(const double* a, int d) {
  if (d == 2) return sym2_lambda_max(a[0], a[1], a[3]);
  double m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a[i * 3 + j];
  return sym3_lambda_max(m);
}

}  // namespace

int SymTensorField::pack(int a, int b, int dim) {
  if (a > b) std::swap(a, b);
  // dim=2: (0,0)->0 (0,1)->1 (1,1)->2 ; dim=3 adds (0,2)->3 (1,2)->4 (2,2)->5
  if (dim == 2) return a + b;
  static constexpr int map3[3][3] = {{0, 1, 3}, {1, 2, 4}, {3, 4, 5}};
  return map3[a][b];
}

double SymTensorField::max_trace_abs() const {
  const std::size_t N = grid.cell_count();
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double tr = 0.0;
    for (int a = 0; a < grid.dim; ++a) tr += at(i, a, a);
    worst = std::max(worst, std::fabs(tr));
  }
  return worst;
}

MomentumParts decompose_momentum(const VectorField& mom) {
  const auto parts = spectral::helmholtz_decompose(mom);
  return MomentumParts{parts.solenoidal, parts.mean, parts.potential};
}

std::vector<std::array<double, 3>> solve_mean_flow_ode(
    const std::vector<std::array<double, 3>>& forcing,
    const std::array<double, 3>& v0, double dt, int dim) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  std::vector<std::array<double, 3>> out;
  out.reserve(forcing.size() + 1);
  out.push_back(v0);
  const double decay = std::exp(-dt);
  std::array<double, 3> v = v0;
  for (const auto& g : forcing) {
    for (int a = 0; a < dim; ++a) v[a] = g[a] + (v[a] - g[a]) * decay;
    out.push_back(v);
  }
  return out;
}

double lambda_max(const double* a, int d) {
  if (d != 2 && d != 3) throw std::invalid_argument("lambda_max supports d = 2, 3");
  double scale = 0.0;
  for (int i = 0; i < d * d; ++i) scale = std::max(scale, std::fabs(a[i]));
  double sym[9];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (std::fabs(a[i * d + j] - a[j * d + i]) > 1e-10 * (1.0 + scale))
        throw std::invalid_argument("lambda_max needs a symmetric matrix");
      sym[i * d + j] = 0.5 * (a[i * d + j] + a[j * d + i]);
    }
  return lambda_max_packed(sym, d);
}

double algebraic_inequality_margin(const std::array<double, 3>& m, int d,
                                   double r, const double* h) {
  if (!(r > 0.0)) throw std::domain_error("density argument must be positive");
  if (d != 2 && d != 3) throw std::invalid_argument("d must be 2 or 3");
  double b[9];
  double m2 = 0.0;
  for (int i = 0; i < d; ++i) m2 += m[i] * m[i];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b[i * d + j] = m[i] * m[j] / r - h[i * d + j];
  return 0.5 * d * lambda_max_packed(b, d) - 0.5 * m2 / r;
}

SubsolutionFrame build_frame(const ScalarField& rho, const VectorField& mom,
                             const ScalarField& psi_t, double pi_gauge,
                             const EntropyLaw& law, const ScalarField& kernel,
                             const ScalarField& phi) {
  const PeriodicGrid& g = rho.grid;
  const int d = g.dim;
  if (d < 2) throw std::invalid_argument("subsolution frames need dim >= 2");
  const std::size_t N = g.cell_count();

  SubsolutionFrame frame;
  MomentumParts parts = decompose_momentum(mom);
  frame.v = std::move(parts.solenoidal);
  frame.mean = parts.mean;
  frame.potential = std::move(parts.potential);
  frame.potential_t = psi_t;
  frame.pi_gauge = pi_gauge;

  // source E = -(grad(K*rho)) rho - mom - rho grad Phi, mean removed
  VectorField source(g);
  {
    const ScalarField conv = convolve(kernel, rho);
    const VectorField gk = gradient(conv);
    const VectorField gphi = gradient(phi);
    std::vector<double> tmp(N);
    for (int a = 0; a < d; ++a) {
      kn().axpby(tmp.data(), 1.0, gk.comp[a].data(), 1.0, gphi.comp[a].data(), N);
      kn().mul(tmp.data(), tmp.data(), rho.data(), N);
      kn().axpby(source.comp[a].data(), -1.0, tmp.data(), -1.0,
                 mom.comp[a].data(), N);
      const double mean = kn().sum(source.comp[a].data(), N) / static_cast<double>(N);
      for (std::size_t i = 0; i < N; ++i) source.comp[a][i] -= mean;
    }
  }

  const VectorField w = spectral::solve_trace_free_elliptic(source);
  frame.correction = SymTensorField(g);
  {
    std::array<VectorField, 3> grads;
    for (int b = 0; b < d; ++b) {
      ScalarField wb(g);
      wb.values.assign(w.comp[b].begin(), w.comp[b].end());
      grads[b] = gradient(wb);
    }
    ScalarField divw(g);
    for (int a = 0; a < d; ++a)
      kn().axpby(divw.values.data(), 1.0, divw.data(), 1.0,
                 grads[a].comp[a].data(), N);
    const double two_over_d = 2.0 / d;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        auto& dst = frame.correction.comp[SymTensorField::pack(a, b, d)];
        kn().axpby(dst.data(), 1.0, grads[b].comp[a].data(), 1.0,
                   grads[a].comp[b].data(), N);
        if (a == b)
          kn().axpby(dst.data(), 1.0, dst.data(), -two_over_d, divw.data(), N);
      }
  }

  frame.e_gauge = ScalarField(g);
  {
    std::vector<double> p(N);
    law.fill_pressure(rho.data(), p.data(), N);
    for (std::size_t i = 0; i < N; ++i)
      frame.e_gauge.values[i] =
          pi_gauge - 0.5 * d * (p[i] + psi_t.values[i]);
  }
  return frame;
}

double correction_residual(const SymTensorField& correction,
                           const VectorField& mean_free_source) {
  const PeriodicGrid& g = correction.grid;
  const int d = g.dim;
  const std::size_t N = g.cell_count();
  double worst = 0.0;
  // div(correction)_b = sum_a d_a H_ab
  for (int b = 0; b < d; ++b) {
    VectorField cols(g);
    for (int a = 0; a < d; ++a)
      cols.comp[a] = correction.comp[SymTensorField::pack(a, b, d)];
    const ScalarField div_b = divergence(cols);
    for (std::size_t i = 0; i < N; ++i)
      worst = std::max(worst,
                       std::fabs(div_b.values[i] + mean_free_source.comp[b][i]));
  }
  return worst;
}

MarginField x0_margin(const SubsolutionFrame& frame, const SymTensorField& f,
                      const ScalarField& rho, const EntropyLaw& law) {
  const PeriodicGrid& g = rho.grid;
  const int d = g.dim;
  const std::size_t N = g.cell_count();
  if (!(min_value(rho) > 0.0))
    throw std::domain_error("admissibility margin needs a positive density");

  // M = v + V + grad Psi
  VectorField m(g);
  {
    const VectorField gpsi = gradient(frame.potential);
    for (int a = 0; a < d; ++a)
      for (std::size_t i = 0; i < N; ++i)
        m.comp[a][i] = frame.v.comp[a][i] + frame.mean[a] + gpsi.comp[a][i];
  }

  std::vector<double> p(N);
  law.fill_pressure(rho.data(), p.data(), N);

  MarginField out;
  out.margin = ScalarField(g);
  double peak = -std::numeric_limits<double>::infinity();
  double mat[9];
  // gauge energy recomputed from (Pi, p, d_t Psi) so callers can re-gauge a
  // frame by setting pi_gauge alone
  for (std::size_t i = 0; i < N; ++i) {
    const double r = rho.values[i];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        mat[a * d + b] = m.comp[a][i] * m.comp[b][i] / r - f.at(i, a, b) +
                         frame.correction.at(i, a, b);
    const double lam = 0.5 * d * lambda_max_packed(mat, d);
    const double gauge_free =
        lam + 0.5 * d * (p[i] + frame.potential_t.values[i]);
    out.margin.values[i] = gauge_free - frame.pi_gauge;
    peak = std::max(peak, gauge_free);
  }
  out.pi_min = peak + 1e-9 * (1.0 + std::fabs(peak));
  return out;
}

}  // namespace relaxhydro
