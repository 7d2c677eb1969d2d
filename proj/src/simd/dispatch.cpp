#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ncck/simd/kernels.hpp"

namespace ncck::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon: return neon_kernels() != nullptr;
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (available(isa)) out.push_back(isa);
  return out;
}

const Kernels& kernels_for(Isa isa) {
  if (!available(isa)) throw std::runtime_error("SIMD variant " + std::string(to_string(isa)) + " is not available");
  switch (isa) {
    case Isa::avx2: return *avx2_kernels();
    case Isa::neon: return *neon_kernels();
    default: return scalar_kernels();
  }
}

namespace {

const Kernels& select() {
  if (const char* env = std::getenv("NCCK_SIMD")) {
    const std::string want(env);
    for (Isa isa : available_isas())
      if (want == to_string(isa)) return kernels_for(isa);
  }
  if (available(Isa::avx2)) return *avx2_kernels();
  if (available(Isa::neon)) return *neon_kernels();
  return scalar_kernels();
}

}  // namespace

const Kernels& active_kernels() {
  static const Kernels& chosen = select();
  return chosen;
}

}  // namespace ncck::simd
