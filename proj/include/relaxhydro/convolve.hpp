// convolve.hpp
// Nonlocal interaction term K*rho as a discrete circular convolution:
//   (K*rho)_i = dx^dim * sum_j K[(i-j) mod n] rho[j].
// Kernel fields store samples on the offset lattice (index k holds K(k*dx)
// with periodic wrap), see PotentialSpec::sample_kernel.

#pragma once

#include "relaxhydro/grid.hpp"

namespace relaxhydro {

enum class ConvolvePath {
  Auto,      // spectral for n >= 64 cells per dimension, direct below
  Direct,    // O(N^2) wrapped sum
  Spectral,  // DFT path
};

ScalarField convolve(const ScalarField& kernel, const ScalarField& rho,
                     ConvolvePath path = ConvolvePath::Auto);

}  // namespace relaxhydro
