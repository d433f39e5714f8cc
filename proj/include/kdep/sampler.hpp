#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdep/interval.hpp"
#include "kdep/perm.hpp"
#include "kdep/rng.hpp"
#include "kdep/word.hpp"

namespace kdep {

/// Float parameters of the coloring for an admissible (q, k): the tuned t
/// (from an isolating interval of width 1e-15), s = t(q-2)/(q-1-t) and the
/// zero weight u = (q-1)/(q-2).
///
/// s is the density of sites that are not bubble endpoints: it equals
/// P(L_i >= 1) for the iid Lehmer entries, so Stage-1 endpoints of the
/// painting are laid with probability 1 - s = P(L_i = 0).
struct ColoringParams {
  int q = 0;
  int k = 0;
  double t = 0;
  double s = 0;
  double u = 0;

  double endpoint_density() const { return 1.0 - s; }
};

/// Cached per (q, k). Throws NoSolution unless qk > 2(k+1).
const ColoringParams& coloring_params(int q, int k);

enum class Method { painting, lehmer, ffiid };

const char* method_name(Method m);
/// Throws std::invalid_argument for unknown names.
Method parse_method(const std::string& name);

/// Cap on sites simulated beyond either side of a requested window.
inline constexpr std::int64_t kMaxExtension = 1'000'000;

struct ColoringSample {
  Interval window;
  /// colors[i - window.a] in [1, q].
  std::vector<int> colors;
  ColoringParams params;
  std::uint64_t seed = 0;
  Method method = Method::painting;
  /// ffiid only: per-site coding radius.
  std::optional<std::vector<int>> radii;
  /// Stage-1 sites (painting) or zeros of L (lehmer, ffiid).
  std::optional<std::vector<std::uint8_t>> endpoint_mask;
  /// lehmer and ffiid: the Lehmer entries L on the window.
  std::optional<std::vector<int>> lehmer;
  /// ffiid only: CFTP lookback in zero-site hops at zero sites, -1 elsewhere.
  std::optional<std::vector<int>> lookback_hops;

  int at(int i) const { return colors[static_cast<std::size_t>(i - window.a)]; }
  Word word() const { return Word(window, colors, params.q); }
};

/// Mallows(t) permutation of [1, n]: decode_lehmer of independent
/// (n-i)-truncated t-geometric entries.
Perm sample_mallows(int n, double t, SplitMix64& rng);

/// Bubble-biased Mallows permutation, weight u^#bubbles t^inv:
/// decode_insertion of independent u-end-weighted (i-a)-truncated
/// t-geometric entries.
Perm sample_bubble_mallows(Interval interval, double t, double u, SplitMix64& rng);

/// Gamma[l] on a window whose endpoints are zeros of l: the union over
/// consecutive-zero blocks of the constraint graphs of the decoded blocks.
/// Throws std::invalid_argument when an endpoint is nonzero or an entry is
/// negative.
ConstraintGraph gamma_from_lehmer(Interval window, std::span<const int> ell);

/// Uniform proper q-coloring of a good graph whose window endpoints are bubble
/// endpoints: a stationary walk on the complete graph colors the bubble
/// endpoints, then each bubble is filled vertex by vertex in the reverse of a
/// simplicial elimination order, each vertex uniform over its q-2 colors.
/// Throws std::invalid_argument for q < 3 or a graph that is not good.
Word uniform_coloring(const ConstraintGraph& g, int q, SplitMix64& rng);

/// The three samplers are pure functions of (q, k, window, seed). Each
/// simulates on an extended window until the required boundary structure
/// exists on both sides, then restricts. Throw NoSolution for inadmissible
/// (q, k), std::invalid_argument for an empty window and std::runtime_error
/// when the extension cap is exceeded.
ColoringSample painting_sample(int q, int k, Interval window, std::uint64_t seed);
/// Painting with explicit parameters; t and s need not be tuned. Throws
/// std::invalid_argument unless q >= 3, 0 < t < 1 and 0 < s < 1.
ColoringSample painting_sample(const ColoringParams& params, Interval window, std::uint64_t seed);
ColoringSample lehmer_pipeline_sample(int q, int k, Interval window, std::uint64_t seed);
ColoringSample ffiid_sample(int q, int k, Interval window, std::uint64_t seed);
ColoringSample sample_coloring(Method m, int q, int k, Interval window, std::uint64_t seed);

/// (f-, f+, bubble graph, local colors) at a site, in coordinates relative to
/// the site.
struct MarkovState {
  int site = 0;
  int f_minus = 0;
  int f_plus = 0;
  ConstraintGraph graph;
  Word local_colors;

  /// Color at offset 0.
  int h() const { return local_colors.at(0); }
  /// Canonical text form; equal states have equal keys.
  std::string key() const;
  friend bool operator==(const MarkovState& x, const MarkovState& y) {
    return x.f_minus == y.f_minus && x.f_plus == y.f_plus && x.graph == y.graph &&
           x.local_colors == y.local_colors;
  }
};

/// State at one site of a sample, with L the Lehmer entries on the window.
/// Throws std::out_of_range when f- or f+ is not inside the window.
MarkovState markov_state(const ColoringSample& sample, std::span<const int> ell, int site);
/// States at every site whose f- and f+ lie inside the window.
std::vector<MarkovState> markov_states(const ColoringSample& sample, std::span<const int> ell);
/// Uses sample.lehmer; throws std::invalid_argument if absent.
std::vector<MarkovState> markov_states(const ColoringSample& sample);

}  // namespace kdep
