// kernels_avx2.cpp
// AVX2/FMA backend, 4-wide doubles. Compiled with -mavx2 -mfma on x86-64
// only; the dispatch layer checks CPU support before handing this table out.

#include "relaxhydro/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace relaxhydro::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m2 = _mm_max_pd(lo, hi);
  const __m128d m1 = _mm_max_sd(m2, _mm_unpackhi_pd(m2, m2));
  return _mm_cvtsd_f64(m1);
}

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m2 = _mm_min_pd(lo, hi);
  const __m128d m1 = _mm_min_sd(m2, _mm_unpackhi_pd(m2, m2));
  return _mm_cvtsd_f64(m1);
}

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_val_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = x[i] > m ? x[i] : m;
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  double m = hmax(acc);
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double max_abs_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    double m = std::fabs(x[0]);
    for (std::size_t i = 1; i < n; ++i) {
      const double a = std::fabs(x[i]);
      m = a > m ? a : m;
    }
    return m;
  }
  __m256d acc = abs_pd(_mm256_loadu_pd(x));
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    m = a > m ? a : m;
  }
  return m;
}

double min_val_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = x[i] < m ? x[i] : m;
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
  double m = hmin(acc);
  for (; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

void axpby_avx2(double* out, double a, const double* x, double b,
                const double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, vx, _mm256_mul_pd(vb, vy)));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void mul_avx2(double* out, const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_avx2(double* out, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void sub_scale_avx2(double* out, double a, const double* x, const double* y,
                    std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(va, _mm256_sub_pd(_mm256_loadu_pd(x + i),
                                                     _mm256_loadu_pd(y + i))));
  for (; i < n; ++i) out[i] = a * (x[i] - y[i]);
}

void reciprocal_avx2(double* out, const double* x, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = 1.0 / x[i];
}

void diff_central_line_avx2(double* out, const double* f, std::size_t n,
                            double inv_2dx) {
  if (n < 6) {
    scalar().diff_central_line(out, f, n, inv_2dx);
    return;
  }
  const __m256d vs = _mm256_set1_pd(inv_2dx);
  out[0] = (f[1] - f[n - 1]) * inv_2dx;
  std::size_t i = 1;
  for (; i + 4 <= n - 1; i += 4) {
    const __m256d fp = _mm256_loadu_pd(f + i + 1);
    const __m256d fm = _mm256_loadu_pd(f + i - 1);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(fp, fm), vs));
  }
  for (; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv_2dx;
  out[n - 1] = (f[0] - f[n - 2]) * inv_2dx;
}

inline __m256d llf_face_pd(__m256d ql, __m256d qr, __m256d fl, __m256d fr,
                           __m256d sl, __m256d sr) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d a = _mm256_max_pd(sl, sr);
  const __m256d central = _mm256_mul_pd(half, _mm256_add_pd(fl, fr));
  const __m256d diss = _mm256_mul_pd(half, _mm256_mul_pd(a, _mm256_sub_pd(qr, ql)));
  return _mm256_sub_pd(central, diss);
}

inline double llf_face_1(double ql, double qr, double fl, double fr, double sl,
                         double sr) {
  const double a = sl > sr ? sl : sr;
  return 0.5 * (fl + fr) - 0.5 * a * (qr - ql);
}

void rusanov_line_avx2(double* acc, const double* q, const double* flux,
                       const double* speed, std::size_t n, double lambda) {
  if (n < 10) {
    scalar().rusanov_line(acc, q, flux, speed, n, lambda);
    return;
  }
  const __m256d vl = _mm256_set1_pd(lambda);
  // interior cells i in [1, n-1): both faces read i-1..i+1 contiguously.
  std::size_t i = 1;
  for (; i + 4 <= n - 1; i += 4) {
    const __m256d qm = _mm256_loadu_pd(q + i - 1);
    const __m256d q0 = _mm256_loadu_pd(q + i);
    const __m256d qp = _mm256_loadu_pd(q + i + 1);
    const __m256d fm = _mm256_loadu_pd(flux + i - 1);
    const __m256d f0 = _mm256_loadu_pd(flux + i);
    const __m256d fp = _mm256_loadu_pd(flux + i + 1);
    const __m256d sm = _mm256_loadu_pd(speed + i - 1);
    const __m256d s0 = _mm256_loadu_pd(speed + i);
    const __m256d sp = _mm256_loadu_pd(speed + i + 1);
    const __m256d gr = llf_face_pd(q0, qp, f0, fp, s0, sp);
    const __m256d gl = llf_face_pd(qm, q0, fm, f0, sm, s0);
    const __m256d upd = _mm256_fnmadd_pd(vl, _mm256_sub_pd(gr, gl),
                                         _mm256_loadu_pd(acc + i));
    _mm256_storeu_pd(acc + i, upd);
  }
  for (; i + 1 < n; ++i) {
    const double gr =
        llf_face_1(q[i], q[i + 1], flux[i], flux[i + 1], speed[i], speed[i + 1]);
    const double gl =
        llf_face_1(q[i - 1], q[i], flux[i - 1], flux[i], speed[i - 1], speed[i]);
    acc[i] -= lambda * (gr - gl);
  }
  // wrap cells 0 and n-1
  const double g_last =
      llf_face_1(q[n - 1], q[0], flux[n - 1], flux[0], speed[n - 1], speed[0]);
  const double g0 = llf_face_1(q[0], q[1], flux[0], flux[1], speed[0], speed[1]);
  acc[0] -= lambda * (g0 - g_last);
  const double g_pen = llf_face_1(q[n - 2], q[n - 1], flux[n - 2], flux[n - 1],
                                  speed[n - 2], speed[n - 1]);
  acc[n - 1] -= lambda * (g_last - g_pen);
}

void rusanov_planes_avx2(double* acc, const double* qm, const double* q0,
                         const double* qp, const double* fm, const double* f0,
                         const double* fp, const double* sm, const double* s0,
                         const double* sp, std::size_t n, double lambda) {
  const __m256d vl = _mm256_set1_pd(lambda);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gr = llf_face_pd(_mm256_loadu_pd(q0 + i), _mm256_loadu_pd(qp + i),
                                   _mm256_loadu_pd(f0 + i), _mm256_loadu_pd(fp + i),
                                   _mm256_loadu_pd(s0 + i), _mm256_loadu_pd(sp + i));
    const __m256d gl = llf_face_pd(_mm256_loadu_pd(qm + i), _mm256_loadu_pd(q0 + i),
                                   _mm256_loadu_pd(fm + i), _mm256_loadu_pd(f0 + i),
                                   _mm256_loadu_pd(sm + i), _mm256_loadu_pd(s0 + i));
    const __m256d upd = _mm256_fnmadd_pd(vl, _mm256_sub_pd(gr, gl),
                                         _mm256_loadu_pd(acc + i));
    _mm256_storeu_pd(acc + i, upd);
  }
  for (; i < n; ++i) {
    const double gr = llf_face_1(q0[i], qp[i], f0[i], fp[i], s0[i], sp[i]);
    const double gl = llf_face_1(qm[i], q0[i], fm[i], f0[i], sm[i], s0[i]);
    acc[i] -= lambda * (gr - gl);
  }
}

void damped_update_avx2(double* out, const double* mom, const double* rho,
                        const double* force, std::size_t n, double dt_over_eps) {
  const double inv = 1.0 / (1.0 + dt_over_eps);
  const __m256d vg = _mm256_set1_pd(dt_over_eps);
  const __m256d vi = _mm256_set1_pd(inv);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_loadu_pd(mom + i);
    const __m256d rf = _mm256_mul_pd(_mm256_loadu_pd(rho + i),
                                     _mm256_loadu_pd(force + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_fnmadd_pd(vg, rf, m), vi));
  }
  for (; i < n; ++i) out[i] = (mom[i] - dt_over_eps * rho[i] * force[i]) * inv;
}

void wave_speed_avx2(double* out, const double* mom, const double* rho,
                     const double* c2, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_div_pd(_mm256_loadu_pd(mom + i),
                                    _mm256_loadu_pd(rho + i));
    const __m256d c = _mm256_sqrt_pd(_mm256_loadu_pd(c2 + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(abs_pd(u), c));
  }
  for (; i < n; ++i) out[i] = std::fabs(mom[i] / rho[i]) + std::sqrt(c2[i]);
}

constexpr Backend kAvx2 = {
    "avx2",
    sum_avx2,
    dot_avx2,
    max_val_avx2,
    max_abs_avx2,
    min_val_avx2,
    axpby_avx2,
    mul_avx2,
    scale_avx2,
    sub_scale_avx2,
    reciprocal_avx2,
    diff_central_line_avx2,
    rusanov_line_avx2,
    rusanov_planes_avx2,
    damped_update_avx2,
    wave_speed_avx2,
};

}  // namespace

const Backend& avx2() { return kAvx2; }

}  // namespace relaxhydro::kernels

#endif  // x86-64
