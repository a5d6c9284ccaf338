// potential.cpp

#include "relaxhydro/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace relaxhydro {

namespace {

// 1D wrapped gaussian at position t, images truncated once they fall 6 sigma
// away (tail below ~1e-8 of the peak).
double wrapped_gauss_1d(double t, double sigma, double period) {
  const double reach = 6.0 * sigma;
  const int j_lo = static_cast<int>(std::floor((t - reach) / period));
  const int j_hi = static_cast<int>(std::ceil((t + reach) / period));
  double s = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double d = t - period * j;
    s += std::exp(-0.5 * d * d / (sigma * sigma));
  }
  return s;
}

// Per-axis factor tables at cell centers.
std::vector<double> axis_factor_centers(const PotentialSpec& p,
                                        const PeriodicGrid& g, int axis) {
  std::vector<double> f(static_cast<std::size_t>(g.n));
  const double L = g.half_width;
  for (int i = 0; i < g.n; ++i) {
    const double x = g.center(i);
    switch (p.kind) {
      case PotentialKind::WrappedGaussian:
        f[i] = wrapped_gauss_1d(x, p.width, 2.0 * L);
        break;
      case PotentialKind::CosineMode:
        f[i] = std::cos(M_PI * p.modes[axis] * x / L);
        break;
      default:
        f[i] = 0.0;
    }
  }
  return f;
}

// Per-axis factor tables on the offset lattice, mirrored exactly.
std::vector<double> axis_factor_offsets(const PotentialSpec& p,
                                        const PeriodicGrid& g, int axis) {
  std::vector<double> f(static_cast<std::size_t>(g.n));
  const double L = g.half_width;
  for (int k = 0; k <= g.n / 2; ++k) {
    const double t = k * g.dx;
    double v = 0.0;
    switch (p.kind) {
      case PotentialKind::WrappedGaussian:
        v = wrapped_gauss_1d(t, p.width, 2.0 * L);
        break;
      case PotentialKind::CosineMode:
        v = std::cos(M_PI * p.modes[axis] * t / L);
        break;
      default:
        v = 0.0;
    }
    f[k] = v;
    f[(g.n - k) % g.n] = v;
  }
  return f;
}

ScalarField tensor_product(const PeriodicGrid& g, double amplitude,
                           const std::array<std::vector<double>, 3>& axis) {
  ScalarField out(g);
  const int n = g.n;
  const int nz = g.dim > 2 ? n : 1;
  const int ny = g.dim > 1 ? n : 1;
  std::size_t idx = 0;
  for (int iz = 0; iz < nz; ++iz) {
    const double fz = g.dim > 2 ? axis[2][iz] : 1.0;
    for (int iy = 0; iy < ny; ++iy) {
      const double fy = g.dim > 1 ? axis[1][iy] : 1.0;
      for (int ix = 0; ix < n; ++ix)
        out.values[idx++] = amplitude * axis[0][ix] * fy * fz;
    }
  }
  return out;
}

std::size_t mirror_index(const PeriodicGrid& g, std::size_t idx) {
  const std::size_t n = static_cast<std::size_t>(g.n);
  std::size_t out = 0;
  std::size_t mult = 1;
  for (int a = 0; a < g.dim; ++a) {
    const std::size_t k = idx % n;
    idx /= n;
    out += ((n - k) % n) * mult;
    mult *= n;
  }
  return out;
}

}  // namespace

PotentialSpec PotentialSpec::zero() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::wrapped_gaussian(double amplitude, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  PotentialSpec p;
  p.kind = PotentialKind::WrappedGaussian;
  p.amplitude = amplitude;
  p.width = width;
  return p;
}

PotentialSpec PotentialSpec::cosine_mode(double amplitude, std::array<int, 3> modes) {
  PotentialSpec p;
  p.kind = PotentialKind::CosineMode;
  p.amplitude = amplitude;
  p.modes = modes;
  return p;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> values) {
  PotentialSpec p;
  p.kind = PotentialKind::Tabulated;
  p.amplitude = 1.0;
  p.table = std::move(values);
  return p;
}

ScalarField PotentialSpec::sample_potential(const PeriodicGrid& g) const {
  if (kind == PotentialKind::Zero) return ScalarField(g);
  if (kind == PotentialKind::Tabulated) {
    if (table.size() != g.cell_count())
      throw std::invalid_argument("tabulated potential size does not match grid");
    ScalarField out(g);
    out.values = table;
    return out;
  }
  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < g.dim; ++a) axis[a] = axis_factor_centers(*this, g, a);
  return tensor_product(g, amplitude, axis);
}

ScalarField PotentialSpec::sample_kernel(const PeriodicGrid& g) const {
  if (kind == PotentialKind::Zero) return ScalarField(g);
  if (kind == PotentialKind::Tabulated) {
    if (table.size() != g.cell_count())
      throw std::invalid_argument("tabulated kernel size does not match grid");
    ScalarField out(g);
    out.values = table;
    if (!is_even_on_offsets(out))
      throw std::invalid_argument("tabulated interaction kernel is not even");
    return out;
  }
  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < g.dim; ++a) axis[a] = axis_factor_offsets(*this, g, a);
  return tensor_product(g, amplitude, axis);
}

double PotentialSpec::lower_bound(const PeriodicGrid& g) const {
  return min_value(sample_potential(g));
}

std::string PotentialSpec::kind_name() const {
  switch (kind) {
    case PotentialKind::Zero: return "zero";
    case PotentialKind::WrappedGaussian: return "wrapped-gaussian";
    case PotentialKind::CosineMode: return "cosine-mode";
    case PotentialKind::Tabulated: return "tabulated";
  }
  return "?";
}

bool is_even_on_offsets(const ScalarField& kernel) {
  for (std::size_t i = 0; i < kernel.size(); ++i)
    if (kernel.values[i] != kernel.values[mirror_index(kernel.grid, i)])
      return false;
  return true;
}

}  // namespace relaxhydro
