#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kdep/rational.hpp"
#include "kdep/rng.hpp"

namespace kdep {

enum class GeomVariant {
  truncated,
  zero_weighted_truncated,
  max_weighted_truncated,
  end_weighted_truncated,
  zero_weighted_infinite,
};

/// Parameters of a geometric variant. Real is Rational for exact mass
/// functions and double for sampling. `trunc` is ignored by the infinite
/// variant; `u` is ignored by the plain truncated one.
template <typename Real>
struct GeomSpec {
  GeomVariant variant = GeomVariant::truncated;
  Real t = 0;
  Real u = 1;
  int trunc = 0;
};

using ExactGeomSpec = GeomSpec<Rational>;
using FloatGeomSpec = GeomSpec<double>;

const char* variant_name(GeomVariant v);
/// Accepts the names returned by variant_name; throws std::invalid_argument.
GeomVariant parse_variant(const std::string& name);

/// Throws std::invalid_argument unless 0 <= t < 1, u >= 0, trunc >= 0 and the
/// total weight is positive.
void validate(const ExactGeomSpec& spec);
void validate(const FloatGeomSpec& spec);

/// P(X = j). Throws std::out_of_range for j < 0 or j > trunc (finite variants).
Rational pmf(const ExactGeomSpec& spec, long j);
double pmf(const FloatGeomSpec& spec, long j);
/// P(X <= j); j < 0 gives 0 and j >= trunc gives 1 for finite variants.
Rational cdf(const ExactGeomSpec& spec, long j);
double cdf(const FloatGeomSpec& spec, long j);

/// Inverse-CDF sampler over a precomputed prefix table. The infinite variant
/// is tabulated until the CDF reaches 1 - 2^-53 or kMaxTable entries.
class GeomSampler {
 public:
  static constexpr std::size_t kMaxTable = 65536;

  explicit GeomSampler(const FloatGeomSpec& spec);

  int operator()(SplitMix64& rng) const { return draw(rng.uniform()); }
  /// Value whose CDF bracket contains the uniform u in [0, 1).
  int draw(double u) const;
  /// Batch form of draw through the active SIMD kernels.
  void draw(const double* u, std::int32_t* out, std::size_t n) const;

  const FloatGeomSpec& spec() const { return spec_; }
  /// table()[j] = P(X <= j), with the last entry forced to 1.
  const std::vector<double>& table() const { return cdf_; }

 private:
  FloatGeomSpec spec_;
  std::vector<double> cdf_;
};

int sample(const FloatGeomSpec& spec, SplitMix64& rng);

struct DominanceRow {
  int n = 0;
  bool dominates = false;
  /// max_k P(S <= k) - P(T <= k); non-positive exactly when S dominates T.
  double worst_gap = 0;
};

struct DominanceReport {
  double n0 = 0;
  /// Smallest n in [1, nMax] from which every row dominates; empty if the
  /// row at nMax fails.
  std::optional<int> holds_from;
  /// Every n in [max(1, ceil(n0)), nMax] dominates.
  bool holds_beyond_n0 = false;
  std::vector<DominanceRow> rows;
};

/// Compares the n-truncated s-geometric S with the u-end-weighted n-truncated
/// t-geometric T for n = 1..nMax. The double inputs are converted exactly and
/// every CDF comparison is done in rational arithmetic. Throws
/// std::invalid_argument unless 0 < t < s < 1, u >= 1 and nMax >= 1.
DominanceReport dominance_check(double s, double t, double u, int nMax);

}  // namespace kdep
