// kernels_scalar.cpp
// Reference implementations. These define the semantics every other backend
// is tested against.

#include "relaxhydro/kernels.hpp"

#include <cmath>

namespace relaxhydro::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_val_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = std::fabs(x[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::fabs(x[i]);
    m = a > m ? a : m;
  }
  return m;
}

double min_val_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

void axpby_scalar(double* out, double a, const double* x, double b,
                  const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void mul_scalar(double* out, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_scalar(double* out, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void sub_scale_scalar(double* out, double a, const double* x, const double* y,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * (x[i] - y[i]);
}

void reciprocal_scalar(double* out, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / x[i];
}

void diff_central_line_scalar(double* out, const double* f, std::size_t n,
                              double inv_2dx) {
  if (n == 1) {
    out[0] = 0.0;
    return;
  }
  out[0] = (f[1] - f[n - 1]) * inv_2dx;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv_2dx;
  out[n - 1] = (f[0] - f[n - 2]) * inv_2dx;
}

inline double llf_face(double ql, double qr, double fl, double fr, double sl,
                       double sr) {
  const double a = sl > sr ? sl : sr;
  return 0.5 * (fl + fr) - 0.5 * a * (qr - ql);
}

void rusanov_line_scalar(double* acc, const double* q, const double* flux,
                         const double* speed, std::size_t n, double lambda) {
  if (n < 2) return;
  // face i+1/2 between cells i and i+1, periodic wrap at i = n-1.
  const double g_last = llf_face(q[n - 1], q[0], flux[n - 1], flux[0],
                                 speed[n - 1], speed[0]);
  double g_left = g_last;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double g_right =
        llf_face(q[i], q[i + 1], flux[i], flux[i + 1], speed[i], speed[i + 1]);
    acc[i] -= lambda * (g_right - g_left);
    g_left = g_right;
  }
  acc[n - 1] -= lambda * (g_last - g_left);
}

void rusanov_planes_scalar(double* acc, const double* qm, const double* q0,
                           const double* qp, const double* fm, const double* f0,
                           const double* fp, const double* sm, const double* s0,
                           const double* sp, std::size_t n, double lambda) {
  for (std::size_t i = 0; i < n; ++i) {
    const double gp = llf_face(q0[i], qp[i], f0[i], fp[i], s0[i], sp[i]);
    const double gm = llf_face(qm[i], q0[i], fm[i], f0[i], sm[i], s0[i]);
    acc[i] -= lambda * (gp - gm);
  }
}

void damped_update_scalar(double* out, const double* mom, const double* rho,
                          const double* force, std::size_t n,
                          double dt_over_eps) {
  const double inv = 1.0 / (1.0 + dt_over_eps);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (mom[i] - dt_over_eps * rho[i] * force[i]) * inv;
}

void wave_speed_scalar(double* out, const double* mom, const double* rho,
                       const double* c2, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::fabs(mom[i] / rho[i]) + std::sqrt(c2[i]);
}

constexpr Backend kScalar = {
    "scalar",
    sum_scalar,
    dot_scalar,
    max_val_scalar,
    max_abs_scalar,
    min_val_scalar,
    axpby_scalar,
    mul_scalar,
    scale_scalar,
    sub_scale_scalar,
    reciprocal_scalar,
    diff_central_line_scalar,
    rusanov_line_scalar,
    rusanov_planes_scalar,
    damped_update_scalar,
    wave_speed_scalar,
};

}  // namespace

const Backend& scalar() { return kScalar; }

}  // namespace relaxhydro::kernels
