#include "kdep/simd/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "kdep/rng.hpp"

namespace {

using kdep::simd::Kernels;

std::vector<const Kernels*> variants() {
  std::vector<const Kernels*> out{&kdep::simd::scalar_kernels()};
  if (kdep::simd::detected_isa() == kdep::simd::Isa::avx2) out.push_back(kdep::simd::avx2_kernels());
  return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(Rng, SiteWordMatchesFormula) {
  const std::uint64_t key = kdep::stream_key(7, kdep::Purpose::ffiid);
  EXPECT_EQ(kdep::site_word(key, -3, 2), kdep::mix64(key + kdep::kGolden * static_cast<std::uint64_t>(-3 * 4 + 2)));
  EXPECT_NE(kdep::site_word(key, 0, 0), kdep::site_word(key, 0, 1));
  EXPECT_NE(kdep::stream_key(7, kdep::Purpose::ffiid), kdep::stream_key(7, kdep::Purpose::lehmer));
  // Reference splitmix64 output for seed 0.
  kdep::SplitMix64 g(0);
  EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g(), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, UnitRange) {
  EXPECT_EQ(kdep::to_unit(0), 0.0);
  EXPECT_LT(kdep::to_unit(~0ULL), 1.0);
  EXPECT_EQ(kdep::to_unit(1ULL << 63), 0.5);
  kdep::SplitMix64 g(5);
  for (int i = 0; i < 10000; ++i) {
    const int b = g.below(7);
    ASSERT_GE(b, 0);
    ASSERT_LT(b, 7);
  }
}

TEST(Simd, SiteUniformsBitwiseEqual) {
  const std::uint64_t key = kdep::stream_key(99, kdep::Purpose::painting);
  for (std::int64_t first : {-1000L, -1L, 0L, 12345L}) {
    for (std::size_t n : {0UL, 1UL, 3UL, 4UL, 7UL, 1001UL}) {
      for (unsigned slot = 0; slot < 4; ++slot) {
        std::vector<double> ref(n);
        for (std::size_t i = 0; i < n; ++i) ref[i] = kdep::to_unit(kdep::site_word(key, first + static_cast<std::int64_t>(i), slot));
        for (const Kernels* k : variants()) {
          std::vector<double> out(n);
          k->site_uniforms(key, first, slot, out.data(), n);
          ASSERT_TRUE(same_bits(ref, out)) << kdep::simd::isa_name(k->isa) << " first=" << first << " n=" << n;
        }
      }
    }
  }
}

TEST(Simd, InverseCdfBitwiseEqual) {
  const std::vector<double> cdf{0.1, 0.25, 0.25, 0.5, 0.9, 0.99, 1.0};
  std::vector<double> u{0.0, 0.1, 0.0999999, 0.25, 0.3, 0.5, 0.95, 0.9999, 0.99, 0.249999};
  kdep::SplitMix64 g(3);
  for (int i = 0; i < 1000; ++i) u.push_back(g.uniform());
  std::vector<std::int32_t> ref(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    ref[i] = static_cast<std::int32_t>(std::upper_bound(cdf.begin(), cdf.end(), u[i]) - cdf.begin());
  }
  for (const Kernels* k : variants()) {
    std::vector<std::int32_t> out(u.size(), -1);
    k->inverse_cdf(cdf.data(), cdf.size(), u.data(), out.data(), u.size());
    EXPECT_EQ(out, ref) << kdep::simd::isa_name(k->isa);
  }
}

TEST(Simd, BelowThresholdBitwiseEqual) {
  kdep::SplitMix64 g(11);
  std::vector<double> u(1003);
  for (double& x : u) x = g.uniform();
  u[5] = 0.375;
  for (double thr : {0.0, 0.375, 0.5, 1.0}) {
    std::vector<std::uint8_t> ref(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ref[i] = u[i] < thr;
    for (const Kernels* k : variants()) {
      std::vector<std::uint8_t> out(u.size(), 9);
      k->below_threshold(u.data(), thr, out.data(), u.size());
      EXPECT_EQ(out, ref) << kdep::simd::isa_name(k->isa);
    }
  }
}

TEST(Simd, Dispatch) {
  const auto detected = kdep::simd::detected_isa();
  EXPECT_EQ(kdep::simd::active_isa(), detected);
  kdep::simd::set_active_isa(kdep::simd::Isa::scalar);
  EXPECT_EQ(kdep::simd::kernels().isa, kdep::simd::Isa::scalar);
  if (detected == kdep::simd::Isa::avx2) {
    kdep::simd::set_active_isa(kdep::simd::Isa::avx2);
    EXPECT_EQ(kdep::simd::kernels().isa, kdep::simd::Isa::avx2);
  } else {
    EXPECT_THROW(kdep::simd::set_active_isa(kdep::simd::Isa::avx2), std::invalid_argument);
  }
  kdep::simd::set_active_isa(detected);
}

}  // namespace
