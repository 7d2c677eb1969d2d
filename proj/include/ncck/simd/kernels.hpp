#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace ncck::simd {

enum class Isa { scalar, avx2, neon };

/// Dense real kernels used by the sampling hot loop. Matrices are m x m,
/// row-major, contiguous.
struct Kernels {
  Isa isa;
  const char* name;
  /// c = a * b.
  void (*gemm)(std::size_t m, const double* a, const double* b, double* c);
  /// y += alpha * x.
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  double (*dot)(std::size_t n, const double* x, const double* y);
};

const Kernels& scalar_kernels();
/// nullptr when the variant was not compiled in.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

/// Compiled in and supported by the running CPU.
bool available(Isa isa);
std::vector<Isa> available_isas();
const Kernels& kernels_for(Isa isa);

/// Best available variant. NCCK_SIMD=scalar|avx2|neon overrides the choice
/// when that variant is available.
const Kernels& active_kernels();

std::string_view to_string(Isa isa);

}  // namespace ncck::simd
