#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdep/rational.hpp"
#include "kdep/sampler.hpp"

namespace kdep {

/// Pass threshold for p-values and the ceiling for required failures.
inline constexpr double kPassP = 1e-3;
inline constexpr double kFailP = 1e-6;
inline constexpr int kMaxCylinderLength = 4;

/// Counts of length-`length` cylinders over q colors, indexed by the base-q
/// code of the word (first character most significant).
struct CylinderTable {
  int q = 0;
  int length = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> counts;

  CylinderTable() = default;
  CylinderTable(int q, int length);

  std::size_t cells() const { return counts.size(); }
  void add(const int* chars);
  std::uint64_t count(const Word& x) const;
  double frequency(std::size_t code) const { return total ? static_cast<double>(counts[code]) / total : 0.0; }
  /// Throws std::invalid_argument when q or length differ.
  void merge(const CylinderTable& other);
  friend bool operator==(const CylinderTable&, const CylinderTable&) = default;
};

std::size_t cylinder_code(const int* chars, int length, int q);
Word cylinder_word(std::size_t code, int length, int q);

/// Window spacing that makes windows of the given length independent under
/// k-dependence.
constexpr int independent_stride(int length, int k) { return length + k + 1; }

/// Tables for lengths 1..maxLen. stride 1 counts every sliding window;
/// larger strides count windows starting at window.a, window.a + stride, ...
/// (prefixes of each window for the shorter lengths). Throws for
/// maxLen > kMaxCylinderLength.
std::vector<CylinderTable> estimate_cylinders(const ColoringSample& sample, int maxLen, int stride = 1, int offset = 0);

/// Probability of every length-`length` cylinder at the tuned t(q,k),
/// evaluated at the midpoint of a 1e-30 isolating interval.
std::vector<double> exact_cylinder_law(int q, int k, int length);
/// Same at a rational t.
std::vector<double> exact_cylinder_law(int q, const Rational& t, int length);

struct TestReport {
  std::string name;
  double statistic = 0;
  std::optional<double> p_value;
  std::optional<double> sigma_distance;
  bool pass = false;
  double threshold = 0;
  std::uint64_t sample_size = 0;
  std::string note;

  friend bool operator==(const TestReport&, const TestReport&) = default;
};

void to_json(nlohmann::json& j, const TestReport& r);
void from_json(const nlohmann::json& j, TestReport& r);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double df);

/// Pearson goodness of fit; the table's windows are taken as independent.
/// A count in a cell of exact mass 0 fails outright. Passes at p > kPassP.
/// Throws std::invalid_argument for an empty table or a size mismatch.
TestReport chi_square_against_exact(const CylinderTable& table, const std::vector<double>& exact,
                                    const std::string& name = "chi_square_against_exact");

/// Two-sample Pearson test of equal cylinder laws. Passes at p > kPassP.
TestReport two_sample_chi_square(const CylinderTable& a, const CylinderTable& b,
                                 const std::string& name = "two_sample_chi_square");

/// Joint counts of (X_i, X_{i+gap}).
struct PairTable {
  int q = 0;
  int gap = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> counts;

  PairTable() = default;
  PairTable(int q, int gap);
  void add(int a, int b) {
    ++counts[static_cast<std::size_t>((a - 1) * q + (b - 1))];
    ++total;
  }
  void merge(const PairTable& other);
};

/// Pairs starting at window.a + offset, window.a + offset + stride, ...
PairTable count_pairs(const ColoringSample& sample, int gap, int stride, int offset = 0);

enum class Expectation { independent, dependent };

/// TV distance between the joint of (X_0, X_gap) and the product of its
/// marginals, against the envelope 4 * E|TV| of an independent multinomial
/// (sum over cells of sigma * sqrt(2/pi) / 2). `independent` passes when TV
/// is within the envelope; `dependent` passes when TV exceeds it and the
/// chi-square test of independence has p < kFailP.
TestReport independence_defect(const PairTable& table, Expectation mode,
                               const std::string& name = "independence_defect");

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TailFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  int points = 0;
};

/// Least squares of log P(X >= n) on n for n in [nMin, nMax], using only n
/// whose tail count is at least minCount. Throws InsufficientData with fewer
/// than 5 usable points.
TailFit tail_fit(const std::map<int, std::uint64_t>& counts, int nMin, int nMax, std::uint64_t minCount = 10);

/// Sharded sampling: shard s samples `per_shard` windows of `stride` sites
/// with seed derive_seed(seed, s); results merge in shard order so the output
/// is independent of the thread count.
struct ShardPlan {
  std::uint64_t windows = 0;
  std::uint64_t per_shard = 20000;
  std::uint64_t seed = 0;
  int threads = 1;
};

std::vector<CylinderTable> sample_cylinders(Method method, int q, int k, int maxLen, int stride, const ShardPlan& plan);
PairTable sample_pairs(Method method, int q, int k, int gap, int stride, const ShardPlan& plan);
/// Same with explicit float parameters (painting only), used for power checks.
std::vector<CylinderTable> sample_cylinders(const ColoringParams& params, int maxLen, int stride, const ShardPlan& plan);

}  // namespace kdep
