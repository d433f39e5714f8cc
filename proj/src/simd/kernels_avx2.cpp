#include <immintrin.h>

#include "kdep/rng.hpp"
#include "kdep/simd/kernels.hpp"

namespace kdep::simd {

namespace {

// Low 64 bits of a * b per lane, built from 32x32->64 products.
inline __m256i mullo64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a_hi, b), _mm256_mul_epu32(a, b_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64x4(__m256i z) {
  const __m256i m1 = _mm256_set1_epi64x(static_cast<long long>(0xbf58476d1ce4e5b9ULL));
  const __m256i m2 = _mm256_set1_epi64x(static_cast<long long>(0x94d049bb133111ebULL));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mullo64(z, m1);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mullo64(z, m2);
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

void site_uniforms(std::uint64_t key, std::int64_t first_site, unsigned slot, double* out, std::size_t n) {
  const std::uint64_t x0 = key + kGolden * (static_cast<std::uint64_t>(first_site) * 4 + slot);
  const std::uint64_t step = kGolden * 4;
  __m256i x = _mm256_set_epi64x(static_cast<long long>(x0 + 3 * step), static_cast<long long>(x0 + 2 * step),
                                static_cast<long long>(x0 + step), static_cast<long long>(x0));
  const __m256i advance = _mm256_set1_epi64x(static_cast<long long>(4 * step));
  const __m256i exponent = _mm256_set1_epi64x(0x3FF0000000000000LL);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i bits = _mm256_or_si256(_mm256_srli_epi64(mix64x4(x), 12), exponent);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_castsi256_pd(bits), one));
    x = _mm256_add_epi64(x, advance);
  }
  for (; i < n; ++i) {
    out[i] = to_unit(site_word(key, first_site + static_cast<std::int64_t>(i), slot));
  }
}

void inverse_cdf(const double* cdf, std::size_t m, const double* u, std::int32_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d uv = _mm256_loadu_pd(u + i);
    __m256i count = _mm256_setzero_si256();
    for (std::size_t j = 0; j < m; ++j) {
      const __m256d le = _mm256_cmp_pd(_mm256_set1_pd(cdf[j]), uv, _CMP_LE_OQ);
      if (_mm256_movemask_pd(le) == 0) {
        break;
      }
      count = _mm256_sub_epi64(count, _mm256_castpd_si256(le));
    }
    alignas(32) std::int64_t c[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(c), count);
    for (int l = 0; l < 4; ++l) {
      out[i + l] = static_cast<std::int32_t>(c[l]);
    }
  }
  for (; i < n; ++i) {
    std::size_t j = 0;
    while (j < m && cdf[j] <= u[i]) {
      ++j;
    }
    out[i] = static_cast<std::int32_t>(j);
  }
}

void below_threshold(const double* u, double threshold, std::uint8_t* out, std::size_t n) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(u + i), t, _CMP_LT_OQ));
    for (int l = 0; l < 4; ++l) {
      out[i + l] = static_cast<std::uint8_t>((mask >> l) & 1);
    }
  }
  for (; i < n; ++i) {
    out[i] = u[i] < threshold ? 1 : 0;
  }
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{Isa::avx2, site_uniforms, inverse_cdf, below_threshold};
  return &k;
}

}  // namespace kdep::simd
