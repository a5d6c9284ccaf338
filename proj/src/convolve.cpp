// convolve.cpp

#include "relaxhydro/convolve.hpp"

#include <stdexcept>

#include "relaxhydro/spectral.hpp"

namespace relaxhydro {

namespace {

ScalarField convolve_direct(const ScalarField& kernel, const ScalarField& rho) {
  const PeriodicGrid& g = rho.grid;
  const int n = g.n;
  double w = 1.0;
  for (int a = 0; a < g.dim; ++a) w *= g.dx;

  ScalarField out(g);
  const auto& K = kernel.values;
  const auto& r = rho.values;

  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += K[(i - j + n) % n] * r[j];
      out.values[i] = w * s;
    }
    return out;
  }
  if (g.dim == 2) {
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        double s = 0.0;
        for (int jy = 0; jy < n; ++jy) {
          const int oy = (iy - jy + n) % n;
          for (int jx = 0; jx < n; ++jx)
            s += K[oy * n + (ix - jx + n) % n] * r[jy * n + jx];
        }
        out.values[iy * n + ix] = w * s;
      }
    return out;
  }
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        double s = 0.0;
        for (int jz = 0; jz < n; ++jz) {
          const std::size_t oz = static_cast<std::size_t>((iz - jz + n) % n) * nn;
          for (int jy = 0; jy < n; ++jy) {
            const std::size_t oy = oz + static_cast<std::size_t>((iy - jy + n) % n) * n;
            const std::size_t ry = static_cast<std::size_t>(jz) * nn +
                                   static_cast<std::size_t>(jy) * n;
            for (int jx = 0; jx < n; ++jx)
              s += K[oy + (ix - jx + n) % n] * r[ry + jx];
          }
        }
        out.values[static_cast<std::size_t>(iz) * nn +
                   static_cast<std::size_t>(iy) * n + ix] = w * s;
      }
  return out;
}

}  // namespace

ScalarField convolve(const ScalarField& kernel, const ScalarField& rho,
                     ConvolvePath path) {
  if (!(kernel.grid == rho.grid))
    throw std::invalid_argument("convolve: kernel and density grids differ");
  switch (path) {
    case ConvolvePath::Direct:
      return convolve_direct(kernel, rho);
    case ConvolvePath::Spectral:
      return spectral::convolve_spectral(kernel, rho);
    case ConvolvePath::Auto:
    default:
      return rho.grid.n >= 64 ? spectral::convolve_spectral(kernel, rho)
                              : convolve_direct(kernel, rho);
  }
}

}  // namespace relaxhydro
