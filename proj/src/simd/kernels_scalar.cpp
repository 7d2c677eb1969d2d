#include "ncck/simd/kernels.hpp"

namespace ncck::simd {

namespace {

void gemm(std::size_t m, const double* a, const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * m;
    for (std::size_t j = 0; j < m; ++j) ci[j] = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      const double x = a[i * m + p];
      const double* bp = b + p * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += x * bp[j];
    }
  }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

constexpr Kernels kScalar{Isa::scalar, "scalar", &gemm, &axpy, &dot};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace ncck::simd
