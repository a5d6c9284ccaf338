// grid.cpp

#include "relaxhydro/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "relaxhydro/kernels.hpp"

namespace relaxhydro {

namespace {
const kernels::Backend& kn() { return kernels::active(); }

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}
}  // namespace

PeriodicGrid PeriodicGrid::make(int dim, int n, double half_width) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dim must be 1, 2 or 3");
  if (n < 2) throw std::invalid_argument("grid needs at least 2 cells per dimension");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half width must be positive");
  PeriodicGrid g;
  g.dim = dim;
  g.n = n;
  g.half_width = half_width;
  g.dx = 2.0 * half_width / n;
  return g;
}

std::size_t PeriodicGrid::cell_count() const {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n);
  return c;
}

double PeriodicGrid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= 2.0 * half_width;
  return v;
}

bool ScalarField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

bool VectorField::all_finite() const {
  for (int a = 0; a < grid.dim; ++a)
    for (double v : comp[a])
      if (!std::isfinite(v)) return false;
  return true;
}

ScalarField sample(const PeriodicGrid& g,
                   const std::function<double(const std::array<double, 3>&)>& f) {
  ScalarField out(g);
  const int n = g.n;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t idx = 0;
  const int nz = g.dim > 2 ? n : 1;
  const int ny = g.dim > 1 ? n : 1;
  for (int iz = 0; iz < nz; ++iz) {
    if (g.dim > 2) x[2] = g.center(iz);
    for (int iy = 0; iy < ny; ++iy) {
      if (g.dim > 1) x[1] = g.center(iy);
      for (int ix = 0; ix < n; ++ix) {
        x[0] = g.center(ix);
        out.values[idx++] = f(x);
      }
    }
  }
  return out;
}

double integrate(const ScalarField& f) {
  double w = 1.0;
  for (int a = 0; a < f.grid.dim; ++a) w *= f.grid.dx;
  return w * kn().sum(f.data(), f.size());
}

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid);
  double w = 1.0;
  for (int a = 0; a < f.grid.dim; ++a) w *= f.grid.dx;
  return w * kn().dot(f.data(), g.data(), f.size());
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double max_abs(const ScalarField& f) { return kn().max_abs(f.data(), f.size()); }
double min_value(const ScalarField& f) { return kn().min_val(f.data(), f.size()); }
double max_value(const ScalarField& f) { return kn().max_val(f.data(), f.size()); }

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  double w = 1.0;
  for (int a = 0; a < f.grid.dim; ++a) w *= f.grid.dx;
  double s = 0.0;
  for (double v : f.values) s += std::pow(std::fabs(v), p);
  return std::pow(w * s, 1.0 / p);
}

namespace detail {

void for_each_axis_slice(
    const PeriodicGrid& g, int axis,
    const std::function<void(std::size_t, std::size_t, std::size_t,
                             std::size_t)>& fn) {
  const std::size_t n = static_cast<std::size_t>(g.n);
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= n;
  const std::size_t block = stride * n;
  const std::size_t total = g.cell_count();
  for (std::size_t base = 0; base < total; base += block) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jm = (j + n - 1) % n;
      const std::size_t jp = (j + 1) % n;
      fn(base + j * stride, base + jm * stride, base + jp * stride, stride);
    }
  }
}

}  // namespace detail

VectorField gradient(const ScalarField& f) {
  VectorField out(f.grid);
  const PeriodicGrid& g = f.grid;
  const double inv2dx = 1.0 / (2.0 * g.dx);
  const std::size_t n = static_cast<std::size_t>(g.n);

  // x axis: contiguous periodic lines
  {
    double* o = out.comp[0].data();
    const double* src = f.data();
    for (std::size_t row = 0; row < f.size(); row += n)
      kn().diff_central_line(o + row, src + row, n, inv2dx);
  }
  // higher axes: whole-slice differences via axpby on contiguous chunks
  for (int a = 1; a < g.dim; ++a) {
    double* o = out.comp[a].data();
    const double* src = f.data();
    detail::for_each_axis_slice(
        g, a, [&](std::size_t off, std::size_t mo, std::size_t po, std::size_t len) {
          kn().sub_scale(o + off, inv2dx, src + po, src + mo, len);
        });
  }
  return out;
}

ScalarField divergence(const VectorField& F) {
  const PeriodicGrid& g = F.grid;
  ScalarField out(g);
  const double inv2dx = 1.0 / (2.0 * g.dx);
  const std::size_t n = static_cast<std::size_t>(g.n);

  {
    std::vector<double> line(n);
    const double* src = F.comp[0].data();
    for (std::size_t row = 0; row < out.size(); row += n) {
      kn().diff_central_line(line.data(), src + row, n, inv2dx);
      kn().axpby(out.data() + row, 1.0, out.data() + row, 1.0, line.data(), n);
    }
  }
  for (int a = 1; a < g.dim; ++a) {
    const double* src = F.comp[a].data();
    std::vector<double> tmp;
    detail::for_each_axis_slice(
        g, a, [&](std::size_t off, std::size_t mo, std::size_t po, std::size_t len) {
          if (tmp.size() < len) tmp.resize(len);
          kn().sub_scale(tmp.data(), inv2dx, src + po, src + mo, len);
          kn().axpby(out.data() + off, 1.0, out.data() + off, 1.0, tmp.data(), len);
        });
  }
  return out;
}

ScalarField add_scaled(double a, const ScalarField& x, double b,
                       const ScalarField& y) {
  require_same_grid(x.grid, y.grid);
  ScalarField out(x.grid);
  kn().axpby(out.data(), a, x.data(), b, y.data(), out.size());
  return out;
}

ScalarField multiply(const ScalarField& x, const ScalarField& y) {
  require_same_grid(x.grid, y.grid);
  ScalarField out(x.grid);
  kn().mul(out.data(), x.data(), y.data(), out.size());
  return out;
}

ScalarField scaled(double a, const ScalarField& x) {
  ScalarField out(x.grid);
  kn().scale(out.data(), a, x.data(), out.size());
  return out;
}

}  // namespace relaxhydro
