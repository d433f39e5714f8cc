#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "kdep/interval.hpp"
#include "kdep/rational.hpp"
#include "kdep/word.hpp"

namespace kdep {

/// Enumeration caps for the brute-force oracles.
inline constexpr int kPermEnumerationCap = 8;
inline constexpr int kColoringEnumerationCap = 10;

/// A permutation of a finite interval I. sigma(i) is the arrival time of
/// position i; arrival times also range over I.
class Perm {
 public:
  Perm() = default;
  /// Throws std::invalid_argument unless image is a bijection of the interval.
  Perm(Interval interval, std::vector<int> image);
  static Perm identity(Interval interval);

  Interval interval() const { return interval_; }
  int size() const { return interval_.size(); }
  int operator()(int i) const { return image_[static_cast<std::size_t>(i - interval_.a)]; }
  /// Position arriving at the given time.
  int inverse(int time) const { return inverse_[static_cast<std::size_t>(time - interval_.a)]; }
  const std::vector<int>& image() const { return image_; }

  /// (k k+1) o sigma: the positions arriving at times k and k+1 trade places.
  Perm swap_times(int k) const;
  /// sigma o (r s): positions r and s trade arrival times.
  Perm swap_positions(int r, int s) const;

  friend bool operator==(const Perm& x, const Perm& y) {
    return x.interval_ == y.interval_ && x.image_ == y.image_;
  }

 private:
  Interval interval_{1, 0};
  std::vector<int> image_;
  std::vector<int> inverse_;
};

enum class CodeKind { lehmer, insertion };

/// A Lehmer code (bounds 0 <= l_i <= b - i) or insertion code
/// (bounds 0 <= l_i <= i - a) on a finite interval.
struct LehmerSeq {
  Interval interval{1, 0};
  std::vector<int> entries;
  CodeKind kind = CodeKind::lehmer;

  LehmerSeq() = default;
  /// Throws std::invalid_argument when an entry violates its bound.
  LehmerSeq(Interval interval, std::vector<int> entries, CodeKind kind);
  int at(int i) const { return entries[static_cast<std::size_t>(i - interval.a)]; }
  friend bool operator==(const LehmerSeq&, const LehmerSeq&) = default;
};

/// Vertex interval plus arcs (i, j), i < j, sorted lexicographically.
struct ConstraintGraph {
  Interval interval{1, 0};
  std::vector<std::pair<int, int>> arcs;

  bool has_arc(int i, int j) const;
  /// Sorted neighbours of each vertex, indexed by offset from interval.a.
  std::vector<std::vector<int>> adjacency() const;
  friend bool operator==(const ConstraintGraph&, const ConstraintGraph&) = default;
};

/// Number of pairs i < j with sigma(i) > sigma(j).
long inversions(const Perm& sigma);

/// l_i = #{j > i : sigma(j) < sigma(i)}.
LehmerSeq lehmer_code(const Perm& sigma);
/// l~_i = lehmer_code(sigma) at the position arriving at time i: the number of
/// earlier arrivals to the right of the newcomer.
LehmerSeq insertion_code(const Perm& sigma);

/// Inverse of lehmer_code; takes the l_i-th smallest unused arrival time.
Perm decode_lehmer(const LehmerSeq& code);
/// Inverse of insertion_code; inserts each newcomer l~_i places from the right.
Perm decode_insertion(const LehmerSeq& code);

/// Images of the composition pi_[a,a+l_a] o ... o pi_[b,b+l_b] of cyclic
/// decrements, evaluated on [a, b]. Entries are unconstrained, so the images
/// may leave the interval; only their relative order is meaningful.
std::vector<long> compose_decrements(Interval interval, std::span<const int> entries);

/// Positions that arrive before every position on one of their sides.
std::vector<int> founders(const Perm& sigma);

/// Arc (i, j) iff every strictly intermediate position arrives after both.
ConstraintGraph constraint_graph(const Perm& sigma);
/// Same rule with arrival values given directly; only their order matters.
ConstraintGraph constraint_graph(Interval interval, std::span<const long> arrival);

/// Vertices not strictly spanned by any arc.
std::vector<int> bubble_endpoints(const ConstraintGraph& g);
/// Consecutive pairs of bubble endpoints.
std::vector<std::pair<int, int>> bubbles(const ConstraintGraph& g);

bool is_proper_coloring(const ConstraintGraph& g, const Word& x);

/// Proper q-colorings of a constraint graph:
/// q (q-2)^(n-1) ((q-1)/(q-2))^#bubbles. Throws for q < 3.
Integer color_count(const ConstraintGraph& g, int q);
/// Exhaustive count; throws above the vertex cap.
Integer color_count_brute(const ConstraintGraph& g, int q, int cap = kColoringEnumerationCap);

/// Every arrival-prefix subword of x is proper. Throws on interval mismatch.
bool is_proper_building(const Perm& sigma, const Word& x);

/// Visits every permutation of the interval; throws above the cap.
void for_each_permutation(Interval interval, const std::function<void(const Perm&)>& f,
                          int cap = kPermEnumerationCap);

}  // namespace kdep
