// grid.hpp
// Cell-centered fields on the flat torus [-L, L)^dim and their discrete
// calculus. Values are stored row-major with the x index fastest; cell
// centers sit at x_i = -L + (i + 1/2) dx with dx = 2L/n.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace relaxhydro {

struct PeriodicGrid {
  int dim = 1;          // 1, 2 or 3
  int n = 2;            // cells per dimension
  double half_width = 1.0;  // L; domain is [-L, L)^dim
  double dx = 1.0;      // 2L/n

  static PeriodicGrid make(int dim, int n, double half_width);

  std::size_t cell_count() const;
  double center(int i) const { return -half_width + (i + 0.5) * dx; }
  double volume() const;  // (2L)^dim

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;
};

struct ScalarField {
  PeriodicGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const PeriodicGrid& g)
      : grid(g), values(g.cell_count(), 0.0) {}

  double* data() { return values.data(); }
  const double* data() const { return values.data(); }
  std::size_t size() const { return values.size(); }

  bool all_finite() const;
};

struct VectorField {
  PeriodicGrid grid;
  std::array<std::vector<double>, 3> comp;  // comp[a] used for a < grid.dim

  VectorField() = default;
  explicit VectorField(const PeriodicGrid& g) : grid(g) {
    for (int a = 0; a < g.dim; ++a) comp[a].assign(g.cell_count(), 0.0);
  }

  bool all_finite() const;
};

// Evaluate f at every cell center; coordinates beyond grid.dim are 0.
ScalarField sample(const PeriodicGrid& g,
                   const std::function<double(const std::array<double, 3>&)>& f);

// dx^dim * sum(values)
double integrate(const ScalarField& f);
// dx^dim * sum(f*g); fields must share a grid
double inner(const ScalarField& f, const ScalarField& g);
// sqrt(inner(f, f))
double l2_norm(const ScalarField& f);
double max_abs(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
// dx^dim * sum(|f|^p) ** (1/p)
double lp_norm(const ScalarField& f, double p);

// Second-order periodic centered differences.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& F);

// Elementwise helpers (fields must share a grid).
ScalarField add_scaled(double a, const ScalarField& x, double b,
                       const ScalarField& y);
ScalarField multiply(const ScalarField& x, const ScalarField& y);
ScalarField scaled(double a, const ScalarField& x);

namespace detail {
// Applies op(line_out, line_a, line_b, len) over every periodic slice pair
// (j-1, j+1) along `axis`; used to build the centered difference for axes
// with stride > 1 out of contiguous-chunk kernels.
void for_each_axis_slice(
    const PeriodicGrid& g, int axis,
    const std::function<void(std::size_t out_off, std::size_t minus_off,
                             std::size_t plus_off, std::size_t len)>& fn);
}  // namespace detail

}  // namespace relaxhydro
