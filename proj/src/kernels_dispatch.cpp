// kernels_dispatch.cpp
// Runtime backend selection.

#include "relaxhydro/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace relaxhydro::kernels {

bool avx2_compiled() {
#if defined(__x86_64__) || defined(_M_X64)
  return true;
#else
  return false;
#endif
}

bool avx2_supported() {
#if defined(__x86_64__) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if !(defined(__x86_64__) || defined(_M_X64))
const Backend& avx2() { return scalar(); }
#endif

namespace {

const Backend& select() {
  const char* req = std::getenv("RELAX_HYDRO_SIMD");
  if (req != nullptr && std::strcmp(req, "scalar") == 0) return scalar();
  if (req != nullptr && std::strcmp(req, "avx2") == 0) {
    if (avx2_compiled() && avx2_supported()) return avx2();
    std::fprintf(stderr,
                 "relax-hydro: RELAX_HYDRO_SIMD=avx2 requested but AVX2 is "
                 "unavailable; using scalar kernels\n");
    return scalar();
  }
  if (avx2_compiled() && avx2_supported()) return avx2();
  return scalar();
}

}  // namespace

const Backend& active() {
  static const Backend& chosen = select();
  return chosen;
}

}  // namespace relaxhydro::kernels
