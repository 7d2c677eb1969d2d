#include "ncck/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace ncck::simd {

namespace {

__attribute__((target("avx2,fma"))) void gemm(std::size_t m, const double* a, const double* b, double* c) {
  const std::size_t wide = m & ~std::size_t{3};
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * m;
    double* ci = c + i * m;
    std::size_t j = 0;
    for (; j < wide; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t p = 0; p < m; ++p)
        acc = _mm256_fmadd_pd(_mm256_broadcast_sd(ai + p), _mm256_loadu_pd(b + p * m + j), acc);
      _mm256_storeu_pd(ci + j, acc);
    }
    for (; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < m; ++p) acc += ai[p] * b[p * m + j];
      ci[j] = acc;
    }
  }
}

__attribute__((target("avx2,fma"))) void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) double dot(std::size_t n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

constexpr Kernels kAvx2{Isa::avx2, "avx2", &gemm, &axpy, &dot};

}  // namespace

const Kernels* avx2_kernels() { return &kAvx2; }

}  // namespace ncck::simd

#else

namespace ncck::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace ncck::simd

#endif
