// potential.hpp
// Analytic/tabulated interaction and confinement potentials. Interaction
// kernels are sampled on the offset lattice (index k holds K(k*dx), wrapped)
// and are mirrored so the sampled evenness K(x) = K(-x) holds exactly;
// confinement potentials are sampled at cell centers.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "relaxhydro/grid.hpp"

namespace relaxhydro {

enum class PotentialKind { Zero, WrappedGaussian, CosineMode, Tabulated };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Zero;
  double amplitude = 0.0;
  double width = 0.25;               // gaussian std dev
  std::array<int, 3> modes{1, 1, 1}; // cosine factors cos(pi*m_a*x_a/L); m=0 -> 1
  std::vector<double> table;         // Tabulated: one value per cell

  static PotentialSpec zero();
  static PotentialSpec wrapped_gaussian(double amplitude, double width);
  static PotentialSpec cosine_mode(double amplitude, std::array<int, 3> modes);
  static PotentialSpec tabulated(std::vector<double> values);

  // Cell-center sampling (confinement use).
  ScalarField sample_potential(const PeriodicGrid& g) const;
  // Offset-lattice sampling (interaction use); validated / constructed even.
  ScalarField sample_kernel(const PeriodicGrid& g) const;
  // min over the cell-center sampling (the recorded lower bound).
  double lower_bound(const PeriodicGrid& g) const;

  std::string kind_name() const;
};

// true iff values[k] == values[mirror(k)] exactly, mirror = (n-k) mod n per axis
bool is_even_on_offsets(const ScalarField& kernel);

}  // namespace relaxhydro
