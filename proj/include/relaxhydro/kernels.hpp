// kernels.hpp
// Hot array kernels behind the field algebra, reductions and the
// finite-volume sweeps. Every kernel has a scalar reference implementation;
// wider backends (AVX2) are selected at runtime and must agree with the
// scalar path within the tolerances pinned by the equivalence tests.

#pragma once

#include <cstddef>

namespace relaxhydro::kernels {

// Function table for one backend. Pointer arguments never alias the output
// unless stated otherwise; axpby/scale/mul allow out == x or out == y
// (element i is fully read before it is written).
struct Backend {
  const char* name;

  // reductions
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*max_val)(const double* x, std::size_t n);   // n >= 1
  double (*max_abs)(const double* x, std::size_t n);   // n >= 1
  double (*min_val)(const double* x, std::size_t n);   // n >= 1

  // elementwise
  void (*axpby)(double* out, double a, const double* x, double b,
                const double* y, std::size_t n);       // out = a*x + b*y
  void (*mul)(double* out, const double* x, const double* y, std::size_t n);
  void (*scale)(double* out, double a, const double* x, std::size_t n);
  // out = a*(x - y); exact zero where x == y (differences before scaling)
  void (*sub_scale)(double* out, double a, const double* x, const double* y,
                    std::size_t n);
  void (*reciprocal)(double* out, const double* x, std::size_t n);

  // periodic centered difference along a contiguous line:
  // out[i] = (f[i+1] - f[i-1]) * inv_2dx, indices mod n. out must not alias f.
  void (*diff_central_line)(double* out, const double* f, std::size_t n,
                            double inv_2dx);

  // local Lax-Friedrichs flux-difference accumulation along a contiguous
  // periodic line: acc[i] -= lambda * (G[i+1/2] - G[i-1/2]) with
  // G[i+1/2] = 0.5*(flux[i]+flux[i+1]) - 0.5*max(speed[i],speed[i+1])*(q[i+1]-q[i]).
  // acc must not alias q/flux/speed.
  void (*rusanov_line)(double* acc, const double* q, const double* flux,
                       const double* speed, std::size_t n, double lambda);

  // same update where the +/- neighbours live in separate arrays (transverse
  // axis of a multi-d grid; qm/q0/qp are the j-1, j, j+1 slices):
  void (*rusanov_planes)(double* acc, const double* qm, const double* q0,
                         const double* qp, const double* fm, const double* f0,
                         const double* fp, const double* sm, const double* s0,
                         const double* sp, std::size_t n, double lambda);

  // semi-implicit damped momentum update:
  // out[i] = (mom[i] - dt_over_eps * rho[i] * force[i]) / (1 + dt_over_eps)
  void (*damped_update)(double* out, const double* mom, const double* rho,
                        const double* force, std::size_t n, double dt_over_eps);

  // out[i] = |mom[i]/rho[i]| + sqrt(c2[i]); c2 >= 0, rho > 0.
  void (*wave_speed)(double* out, const double* mom, const double* rho,
                     const double* c2, std::size_t n);
};

// Reference backend, always available.
const Backend& scalar();

// True when the binary contains the AVX2 backend (x86-64 build).
bool avx2_compiled();
// True when the running CPU supports it.
bool avx2_supported();
// AVX2 backend; call only when avx2_compiled() && avx2_supported().
const Backend& avx2();

// Backend selected once at startup: AVX2 when compiled in and supported,
// else scalar. Env RELAX_HYDRO_SIMD=scalar|avx2|auto overrides (a forced
// backend that is unavailable falls back to scalar with a note on stderr).
const Backend& active();

}  // namespace relaxhydro::kernels
