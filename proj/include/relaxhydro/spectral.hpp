// spectral.hpp
// FFT-backed helpers on the periodic grid: fast circular convolution and the
// constant-coefficient solves used by the momentum decomposition. All
// derivative symbols use the modified wavenumber sin(2*pi*j/n)/dx so that the
// spectral solves are exact inverses of the centered-difference operators in
// grid.hpp.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "relaxhydro/grid.hpp"

namespace relaxhydro::spectral {

// Discrete Fourier transform of a real field (unnormalized forward DFT).
std::vector<std::complex<double>> forward(const PeriodicGrid& g,
                                          const std::vector<double>& values);
// Inverse DFT, normalized by 1/N; imaginary parts are discarded.
std::vector<double> inverse_real(const PeriodicGrid& g,
                                 const std::vector<std::complex<double>>& spec);

// Symbol of the periodic centered difference: D0 e^{i k x} = i kt e^{i k x}.
double modified_wavenumber(int j, int n, double dx);

// dx^dim * circular_convolution(kernel, rho) via the convolution theorem.
ScalarField convolve_spectral(const ScalarField& kernel, const ScalarField& rho);

struct HelmholtzParts {
  VectorField solenoidal;        // mean-zero, centered-divergence-free
  std::array<double, 3> mean{};  // spatial average of each component
  ScalarField potential;         // mean-zero; gradient() of it is the curl-free part
};

// mom = solenoidal + mean + gradient(potential), exactly (the solenoidal part
// is formed in physical space as the remainder).
HelmholtzParts helmholtz_decompose(const VectorField& mom);

// Solve (div o grad) psi = f for mean-zero f. Modes invisible to the centered
// symbol (the mean and pure Nyquist modes) are dropped; psi is mean-zero.
ScalarField solve_poisson_fd(const ScalarField& f);

// Solve -div(grad w + grad^T w - (2/d) div w I) = source, mode by mode, for
// source with zero mean per component. Nyquist-singular modes are dropped.
VectorField solve_trace_free_elliptic(const VectorField& source);

}  // namespace relaxhydro::spectral
