#pragma once

#include <cstddef>
#include <cstdint>

namespace kdep::simd {

enum class Isa { scalar, avx2 };

/// Batch kernels behind the samplers. Every variant produces bitwise identical
/// output; only throughput differs.
struct Kernels {
  Isa isa;
  /// out[i] = to_unit(site_word(key, first_site + i, slot)).
  void (*site_uniforms)(std::uint64_t key, std::int64_t first_site, unsigned slot, double* out, std::size_t n);
  /// out[i] = #{j : cdf[j] <= u[i]}, the inverse-CDF draw for a
  /// non-decreasing table whose last entry exceeds every u.
  void (*inverse_cdf)(const double* cdf, std::size_t m, const double* u, std::int32_t* out, std::size_t n);
  /// out[i] = u[i] < threshold.
  void (*below_threshold)(const double* u, double threshold, std::uint8_t* out, std::size_t n);
};

const Kernels& scalar_kernels();
/// Null when the build has no AVX2 variant.
const Kernels* avx2_kernels();

/// Best variant the running CPU supports.
Isa detected_isa();
/// Variant used by kernels(); defaults to detected_isa().
Isa active_isa();
/// Throws std::invalid_argument if the CPU or build lacks the variant.
void set_active_isa(Isa isa);
const Kernels& kernels();

const char* isa_name(Isa isa);

}  // namespace kdep::simd
