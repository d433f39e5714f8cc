#include <atomic>
#include <stdexcept>

#include "kdep/simd/kernels.hpp"

namespace kdep::simd {

#ifndef KDEP_HAVE_AVX2
const Kernels* avx2_kernels() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() { return avx2_kernels() != nullptr && cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    throw std::invalid_argument("AVX2 kernels are not available on this build or CPU");
  }
  active().store(isa, std::memory_order_relaxed);
}

const Kernels& kernels() {
  if (active_isa() == Isa::avx2) {
    return *avx2_kernels();
  }
  return scalar_kernels();
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace kdep::simd
