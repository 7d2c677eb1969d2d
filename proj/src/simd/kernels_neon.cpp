#include "ncck/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace ncck::simd {

namespace {

void gemm(std::size_t m, const double* a, const double* b, double* c) {
  const std::size_t wide = m & ~std::size_t{1};
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * m;
    double* ci = c + i * m;
    std::size_t j = 0;
    for (; j < wide; j += 2) {
      float64x2_t acc = vdupq_n_f64(0.0);
      for (std::size_t p = 0; p < m; ++p) acc = vfmaq_n_f64(acc, vld1q_f64(b + p * m + j), ai[p]);
      vst1q_f64(ci + j, acc);
    }
    for (; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < m; ++p) acc += ai[p] * b[p * m + j];
      ci[j] = acc;
    }
  }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), alpha));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot(std::size_t n, const double* x, const double* y) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double out = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

constexpr Kernels kNeon{Isa::neon, "neon", &gemm, &axpy, &dot};

}  // namespace

const Kernels* neon_kernels() { return &kNeon; }

}  // namespace ncck::simd

#else

namespace ncck::simd {
const Kernels* neon_kernels() { return nullptr; }
}  // namespace ncck::simd

#endif
