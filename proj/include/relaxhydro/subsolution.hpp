// subsolution.hpp
// Constructive scaffolding around the convex-integration existence argument:
// the momentum decomposition m = v + V + grad Psi, the mean-flow relaxation
// ODE, the trace-free elliptic correction field, the pointwise max-eigenvalue
// inequality and the admissibility margin of candidate fields.

#pragma once

#include <array>
#include <vector>

#include "relaxhydro/entropy.hpp"
#include "relaxhydro/grid.hpp"

namespace relaxhydro {

// Pointwise symmetric d x d tensor field, packed upper triangle.
struct SymTensorField {
  PeriodicGrid grid;
  std::array<std::vector<double>, 6> comp;

  SymTensorField() = default;
  explicit SymTensorField(const PeriodicGrid& g) : grid(g) {
    for (int idx = 0; idx < packed_size(g.dim); ++idx)
      comp[idx].assign(g.cell_count(), 0.0);
  }

  static int packed_size(int dim) { return dim * (dim + 1) / 2; }
  static int pack(int a, int b, int dim);
  double at(std::size_t cell, int a, int b) const {
    return comp[pack(a, b, grid.dim)][cell];
  }
  double& at(std::size_t cell, int a, int b) {
    return comp[pack(a, b, grid.dim)][cell];
  }
  // max |sum_a H_aa| over cells
  double max_trace_abs() const;
};

struct MomentumParts {
  VectorField solenoidal;        // v: mean-zero, discretely divergence-free
  std::array<double, 3> mean{};  // V
  ScalarField potential;         // Psi, mean-zero
};

// Exact splitting m = v + V + grad(Psi) against the centered-difference
// operators (spectral with the matching modified wavenumber).
MomentumParts decompose_momentum(const VectorField& mom);

// dV/dt + V = G with piecewise-constant forcing G_n over steps of length dt;
// exact exponential update per step. Returns the series including V(0).
std::vector<std::array<double, 3>> solve_mean_flow_ode(
    const std::vector<std::array<double, 3>>& forcing,
    const std::array<double, 3>& v0, double dt, int dim);

// Largest eigenvalue of a symmetric d x d matrix (row-major); inputs with
// asymmetry above 1e-10 * scale are rejected.
double lambda_max(const double* a, int d);

// (d/2) lambda_max[M x M / r - H] - |M|^2 / (2r); nonnegative for trace-free
// symmetric H. H is row-major d x d.
double algebraic_inequality_margin(const std::array<double, 3>& m, int d,
                                   double r, const double* h);

struct SubsolutionFrame {
  VectorField v;                 // divergence-free, mean-zero
  std::array<double, 3> mean{};  // V
  ScalarField potential;         // Psi
  ScalarField potential_t;       // d_t Psi (supplied by the caller)
  SymTensorField correction;     // trace-free elliptic correction of the source
  double pi_gauge = 0.0;         // Pi
  ScalarField e_gauge;           // Pi - (d/2)(p(rho) + d_t Psi)
};

// Builds the frame for a candidate momentum field: decomposes it, solves the
// trace-free elliptic system for the source
//   E = -(grad(K*rho)) rho - mom - rho grad(Phi)   (unit coefficients)
// with its mean removed, and fixes the kinetic-energy gauge.
SubsolutionFrame build_frame(const ScalarField& rho, const VectorField& mom,
                             const ScalarField& psi_t, double pi_gauge,
                             const EntropyLaw& law, const ScalarField& kernel,
                             const ScalarField& phi);

// max over cells of |div(correction) + source'| where source' is the
// mean-free source the correction was built for.
double correction_residual(const SymTensorField& correction,
                           const VectorField& mean_free_source);

struct MarginField {
  ScalarField margin;  // negative everywhere <=> admissible candidate
  double pi_min = 0.0; // smallest gauge making the margin negative everywhere
};

// Pointwise (d/2) lambda_max[M x M / rho - F + correction] - e_gauge with
// M = v + V + grad Psi; also reports the minimal admissible gauge.
MarginField x0_margin(const SubsolutionFrame& frame, const SymTensorField& f,
                      const ScalarField& rho, const EntropyLaw& law);

}  // namespace relaxhydro
