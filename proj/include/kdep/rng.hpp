#pragma once

#include <bit>
#include <cstdint>

namespace kdep {

// Stream splitting rule (stable across versions):
//   key(seed, purpose)        = mix64(seed + G * (purpose + 1))
//   word(key, site, slot)     = mix64(key + G * (4 * site + slot))   (mod 2^64)
//   uniform(word)             = (word >> 12) * 2^-52, in [0, 1)
// where G = 0x9e3779b97f4a7c15 and mix64 is the splitmix64 finalizer. Per-site
// iid inputs read word(key, site, slot) directly; sequential draws within a
// bubble or gap use SplitMix64 seeded with the word of the site that owns them.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline double to_unit(std::uint64_t x) {
  return std::bit_cast<double>((x >> 12) | 0x3FF0000000000000ULL) - 1.0;
}

enum class Purpose : std::uint64_t {
  painting = 1,
  lehmer = 2,
  ffiid = 3,
  permutation = 4,
  coloring = 5,
  verify = 6,
};

constexpr std::uint64_t stream_key(std::uint64_t seed, Purpose purpose) {
  return mix64(seed + kGolden * (static_cast<std::uint64_t>(purpose) + 1));
}

constexpr std::uint64_t site_word(std::uint64_t key, std::int64_t site, unsigned slot) {
  return mix64(key + kGolden * (static_cast<std::uint64_t>(site) * 4 + slot));
}

/// Seed for shard `shard` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t shard) {
  return mix64(seed ^ mix64(shard + kGolden));
}

/// Sequential splitmix64 generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    state_ += kGolden;
    return mix64(state_);
  }
  double uniform() { return to_unit((*this)()); }
  /// Uniform on {0, ..., n-1}.
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::uint64_t state_;
};

}  // namespace kdep
