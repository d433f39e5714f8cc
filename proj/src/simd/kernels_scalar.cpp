#include "kdep/rng.hpp"
#include "kdep/simd/kernels.hpp"

namespace kdep::simd {

namespace {

void site_uniforms(std::uint64_t key, std::int64_t first_site, unsigned slot, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = to_unit(site_word(key, first_site + static_cast<std::int64_t>(i), slot));
  }
}

void inverse_cdf(const double* cdf, std::size_t m, const double* u, std::int32_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    while (j < m && cdf[j] <= u[i]) {
      ++j;
    }
    out[i] = static_cast<std::int32_t>(j);
  }
}

void below_threshold(const double* u, double threshold, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = u[i] < threshold ? 1 : 0;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::scalar, site_uniforms, inverse_cdf, below_threshold};
  return k;
}

}  // namespace kdep::simd
