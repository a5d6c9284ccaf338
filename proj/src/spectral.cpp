// spectral.cpp

#include "relaxhydro/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace relaxhydro::spectral {

namespace {

// FFTW plan creation is not thread-safe; execution on distinct arrays is.
// Plans are created once per (dim, n, sign) with FFTW_UNALIGNED so they can
// be replayed on any caller buffer.
class PlanCache {
 public:
  fftw_plan get(int dim, int n, int sign) {
    const std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::make_tuple(dim, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    fftw_complex* buf = fftw_alloc_complex(total);
    int dims[3] = {n, n, n};
    fftw_plan p = fftw_plan_dft(dim, dims, buf, buf, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (p == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(const PeriodicGrid& g, int sign, std::complex<double>* in,
             std::complex<double>* out) {
  fftw_plan p = cache().get(g.dim, g.n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in),
                   reinterpret_cast<fftw_complex*>(out));
}

// Iterate all modes, handing the per-axis integer indices to fn.
template <typename Fn>
void for_each_mode(const PeriodicGrid& g, Fn&& fn) {
  const int n = g.n;
  const int nz = g.dim > 2 ? n : 1;
  const int ny = g.dim > 1 ? n : 1;
  std::size_t idx = 0;
  for (int jz = 0; jz < nz; ++jz)
    for (int jy = 0; jy < ny; ++jy)
      for (int jx = 0; jx < n; ++jx) fn(idx++, jx, jy, jz);
}

}  // namespace

double modified_wavenumber(int j, int n, double dx) {
  return std::sin(2.0 * M_PI * static_cast<double>(j) / n) / dx;
}

std::vector<std::complex<double>> forward(const PeriodicGrid& g,
                                          const std::vector<double>& values) {
  std::vector<std::complex<double>> buf(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) buf[i] = values[i];
  execute(g, FFTW_FORWARD, buf.data(), buf.data());
  return buf;
}

std::vector<double> inverse_real(const PeriodicGrid& g,
                                 const std::vector<std::complex<double>>& spec) {
  std::vector<std::complex<double>> buf(spec);
  execute(g, FFTW_BACKWARD, buf.data(), buf.data());
  const double norm = 1.0 / static_cast<double>(buf.size());
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real() * norm;
  return out;
}

ScalarField convolve_spectral(const ScalarField& kernel, const ScalarField& rho) {
  if (!(kernel.grid == rho.grid))
    throw std::invalid_argument("convolve: kernel and density grids differ");
  auto kh = forward(kernel.grid, kernel.values);
  const auto rh = forward(rho.grid, rho.values);
  for (std::size_t i = 0; i < kh.size(); ++i) kh[i] *= rh[i];
  ScalarField out(rho.grid);
  out.values = inverse_real(rho.grid, kh);
  double w = 1.0;
  for (int a = 0; a < rho.grid.dim; ++a) w *= rho.grid.dx;
  for (double& v : out.values) v *= w;
  return out;
}

HelmholtzParts helmholtz_decompose(const VectorField& mom) {
  const PeriodicGrid& g = mom.grid;
  const int d = g.dim;
  const std::size_t total = g.cell_count();

  HelmholtzParts parts;
  parts.potential = ScalarField(g);

  std::array<std::vector<std::complex<double>>, 3> mh;
  for (int a = 0; a < d; ++a) mh[a] = forward(g, mom.comp[a]);

  for (int a = 0; a < d; ++a)
    parts.mean[a] = mh[a][0].real() / static_cast<double>(total);

  std::vector<std::complex<double>> psih(total, {0.0, 0.0});
  for_each_mode(g, [&](std::size_t idx, int jx, int jy, int jz) {
    const double kt[3] = {modified_wavenumber(jx, g.n, g.dx),
                          d > 1 ? modified_wavenumber(jy, g.n, g.dx) : 0.0,
                          d > 2 ? modified_wavenumber(jz, g.n, g.dx) : 0.0};
    const double k2 = kt[0] * kt[0] + kt[1] * kt[1] + kt[2] * kt[2];
    if (k2 <= 0.0) return;  // mean & pure-Nyquist modes stay in the remainder
    std::complex<double> kdotm{0.0, 0.0};
    for (int a = 0; a < d; ++a) kdotm += kt[a] * mh[a][idx];
    psih[idx] = std::complex<double>(0.0, -1.0) * kdotm / k2;
  });
  parts.potential.values = inverse_real(g, psih);

  // Remainder in physical space: exact reconstruction by construction.
  const VectorField grad_psi = gradient(parts.potential);
  parts.solenoidal = VectorField(g);
  for (int a = 0; a < d; ++a)
    for (std::size_t i = 0; i < total; ++i)
      parts.solenoidal.comp[a][i] =
          mom.comp[a][i] - parts.mean[a] - grad_psi.comp[a][i];
  return parts;
}

ScalarField solve_poisson_fd(const ScalarField& f) {
  const PeriodicGrid& g = f.grid;
  auto fh = forward(g, f.values);
  for_each_mode(g, [&](std::size_t idx, int jx, int jy, int jz) {
    const double kt[3] = {modified_wavenumber(jx, g.n, g.dx),
                          g.dim > 1 ? modified_wavenumber(jy, g.n, g.dx) : 0.0,
                          g.dim > 2 ? modified_wavenumber(jz, g.n, g.dx) : 0.0};
    const double k2 = kt[0] * kt[0] + kt[1] * kt[1] + kt[2] * kt[2];
    fh[idx] = k2 > 0.0 ? fh[idx] / (-k2) : std::complex<double>{0.0, 0.0};
  });
  ScalarField out(g);
  out.values = inverse_real(g, fh);
  return out;
}

VectorField solve_trace_free_elliptic(const VectorField& source) {
  const PeriodicGrid& g = source.grid;
  const int d = g.dim;
  if (d < 2)
    throw std::invalid_argument("trace-free elliptic solve needs dim >= 2");

  std::array<std::vector<std::complex<double>>, 3> sh;
  for (int a = 0; a < d; ++a) sh[a] = forward(g, source.comp[a]);

  // A(k) w = s with A = |kt|^2 I + (1 - 2/d) kt kt^T; the closed-form inverse
  // is (1/|kt|^2)(I - beta kt kt^T / |kt|^2), beta = (1-2/d)/(2-2/d).
  const double c = 1.0 - 2.0 / d;
  const double beta = c / (1.0 + c);
  for_each_mode(g, [&](std::size_t idx, int jx, int jy, int jz) {
    const double kt[3] = {modified_wavenumber(jx, g.n, g.dx),
                          modified_wavenumber(jy, g.n, g.dx),
                          d > 2 ? modified_wavenumber(jz, g.n, g.dx) : 0.0};
    const double k2 = kt[0] * kt[0] + kt[1] * kt[1] + kt[2] * kt[2];
    if (k2 <= 0.0) {
      for (int a = 0; a < d; ++a) sh[a][idx] = {0.0, 0.0};
      return;
    }
    std::complex<double> kdots{0.0, 0.0};
    for (int a = 0; a < d; ++a) kdots += kt[a] * sh[a][idx];
    for (int a = 0; a < d; ++a)
      sh[a][idx] = (sh[a][idx] - beta * kdots * kt[a] / k2) / k2;
  });

  VectorField w(g);
  for (int a = 0; a < d; ++a) w.comp[a] = inverse_real(g, sh[a]);
  return w;
}

}  // namespace relaxhydro::spectral
