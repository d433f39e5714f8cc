#include "kdep/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kdep/dist.hpp"
#include "kdep/simd/kernels.hpp"
#include "kdep/tpoly.hpp"

namespace kdep {

namespace {

std::size_t idx(std::int64_t site, std::int64_t base) { return static_cast<std::size_t>(site - base); }

// j in [0, m) with P(j) proportional to t^j, by closed-form inversion.
int truncated_draw(double t, int m, double u) {
  if (m <= 1) return 0;
  const double j = std::floor(std::log1p(-u * (1.0 - std::pow(t, m))) / std::log(t));
  if (!(j > 0)) return 0;
  return j >= m - 1 ? m - 1 : static_cast<int>(j);
}

// u-end-weighted i-truncated t-geometric.
int end_weighted_draw(double t, double u, int i, double v) {
  if (i == 0) return 0;
  const double ti = std::pow(t, i);
  const double inner = (t - ti) / (1.0 - t);
  double r = v * (u * (1.0 + ti) + inner);
  if (r < u) return 0;
  r -= u;
  if (r < inner) return 1 + truncated_draw(t, i - 1, r / inner);
  return i;
}

// Uniform color in [1, q] other than c.
int other_color(int q, int c, SplitMix64& rng) {
  int r = rng.below(q - 1) + 1;
  return r >= c ? r + 1 : r;
}

// Uniform color in [1, q] other than the distinct colors c1, c2.
int other_color(int q, int c1, int c2, SplitMix64& rng) {
  const int lo = std::min(c1, c2);
  const int hi = std::max(c1, c2);
  int r = rng.below(q - 2) + 1;
  if (r >= lo) ++r;
  if (r >= hi) ++r;
  return r;
}

// Per-site values generated on demand over a growing interval of sites.
template <typename T>
class SiteField {
 public:
  using Fill = std::function<void(std::int64_t first, std::size_t n, T* out)>;

  SiteField(Fill fill, std::int64_t lo, std::int64_t hi) : fill_(std::move(fill)), lo_(lo) {
    values_.resize(static_cast<std::size_t>(hi - lo + 1));
    fill_(lo, values_.size(), values_.data());
  }

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(values_.size()) - 1; }
  T operator[](std::int64_t site) const { return values_[idx(site, lo_)]; }

  void cover(std::int64_t site) {
    if (site < lo_) {
      const std::size_t n = static_cast<std::size_t>(std::max<std::int64_t>(lo_ - site, 256));
      std::vector<T> front(n);
      fill_(lo_ - static_cast<std::int64_t>(n), n, front.data());
      values_.insert(values_.begin(), front.begin(), front.end());
      lo_ -= static_cast<std::int64_t>(n);
    } else if (site > hi()) {
      const std::size_t n = static_cast<std::size_t>(std::max<std::int64_t>(site - hi(), 256));
      const std::size_t old = values_.size();
      values_.resize(old + n);
      fill_(hi() - static_cast<std::int64_t>(n) + 1, n, values_.data() + old);
    }
  }

 private:
  Fill fill_;
  std::int64_t lo_;
  std::vector<T> values_;
};

[[noreturn]] void extension_overflow(const char* what, Interval window) {
  std::ostringstream os;
  os << what << ": no boundary site within " << kMaxExtension << " sites of the window [" << window.a << ", "
     << window.b << "]";
  throw std::runtime_error(os.str());
}

// Largest site <= from satisfying pred.
template <typename T, typename Pred>
std::int64_t find_left(SiteField<T>& f, std::int64_t from, Pred pred, Interval window, const char* what) {
  for (std::int64_t i = from;; --i) {
    if (window.a - i > kMaxExtension) extension_overflow(what, window);
    f.cover(i);
    if (pred(f[i])) return i;
  }
}

// Smallest site >= from satisfying pred.
template <typename T, typename Pred>
std::int64_t find_right(SiteField<T>& f, std::int64_t from, Pred pred, Interval window, const char* what) {
  for (std::int64_t i = from;; ++i) {
    if (i - window.b > kMaxExtension) extension_overflow(what, window);
    f.cover(i);
    if (pred(f[i])) return i;
  }
}

SiteField<std::int32_t> lehmer_field(const ColoringParams& p, std::uint64_t key, unsigned slot, Interval window) {
  auto sampler = std::make_shared<GeomSampler>(FloatGeomSpec{GeomVariant::zero_weighted_infinite, p.t, p.u, 0});
  return SiteField<std::int32_t>(
      [sampler, key, slot](std::int64_t first, std::size_t n, std::int32_t* out) {
        std::vector<double> u(n);
        simd::kernels().site_uniforms(key, first, slot, u.data(), n);
        sampler->draw(u.data(), out, n);
      },
      window.a, window.b);
}

// Colors the interior of a block [a, b] of consecutive zeros, whose ends are
// already colored, in arrival order of the decoded block.
void fill_block(std::span<const int> ell, std::span<int> x, int q, SplitMix64& rng) {
  const int m = static_cast<int>(ell.size()) - 1;
  if (m < 2) return;
  const std::vector<long> arrival = compose_decrements(Interval{0, m}, ell);
  std::vector<int> order(static_cast<std::size_t>(m) + 1);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return arrival[static_cast<std::size_t>(i)] < arrival[static_cast<std::size_t>(j)]; });
  if (order[0] != 0 || order[1] != m) {
    throw std::logic_error("fill_block: block ends are not the first two arrivals");
  }
  std::vector<int> arrived{0, m};
  for (std::size_t r = 2; r < order.size(); ++r) {
    const int v = order[r];
    const auto it = std::lower_bound(arrived.begin(), arrived.end(), v);
    const int right = *it;
    const int left = *(it - 1);
    x[static_cast<std::size_t>(v)] = other_color(q, x[static_cast<std::size_t>(left)], x[static_cast<std::size_t>(right)], rng);
    arrived.insert(it, v);
  }
}

void require_window(Interval window) {
  if (window.empty()) {
    throw std::invalid_argument("sampler window must be non-empty");
  }
}

ColoringSample make_sample(const ColoringParams& p, Interval window, std::uint64_t seed, Method m) {
  ColoringSample out;
  out.window = window;
  out.params = p;
  out.seed = seed;
  out.method = m;
  out.colors.resize(static_cast<std::size_t>(window.size()));
  return out;
}

bool arc_between(const std::vector<std::vector<int>>& adj, int base, int i, int j) {
  const auto& n = adj[static_cast<std::size_t>(i - base)];
  return std::binary_search(n.begin(), n.end(), j);
}

}  // namespace

const ColoringParams& coloring_params(int q, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, ColoringParams> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find({q, k}); it != cache.end()) {
    return it->second;
  }
  const AlgebraicT root = solve_tuning(q, k, parse_rational("1e-15"));
  ColoringParams p;
  p.q = q;
  p.k = k;
  p.t = root.value();
  p.s = p.t * (q - 2) / (q - 1 - p.t);
  p.u = static_cast<double>(q - 1) / (q - 2);
  return cache.emplace(std::pair{q, k}, p).first->second;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::painting:
      return "painting";
    case Method::lehmer:
      return "lehmer";
    case Method::ffiid:
      return "ffiid";
  }
  return "";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::painting, Method::lehmer, Method::ffiid}) {
    if (name == method_name(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

Perm sample_mallows(int n, double t, SplitMix64& rng) {
  if (n < 1 || !(t >= 0 && t < 1)) {
    throw std::invalid_argument("sample_mallows needs n >= 1 and 0 <= t < 1");
  }
  std::vector<int> entries(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    entries[static_cast<std::size_t>(i - 1)] = truncated_draw(t, n - i + 1, rng.uniform());
  }
  return decode_lehmer(LehmerSeq(Interval{1, n}, std::move(entries), CodeKind::lehmer));
}

Perm sample_bubble_mallows(Interval interval, double t, double u, SplitMix64& rng) {
  if (interval.empty() || !(t >= 0 && t < 1) || !(u > 0)) {
    throw std::invalid_argument("sample_bubble_mallows needs a non-empty interval, 0 <= t < 1 and u > 0");
  }
  std::vector<int> entries(static_cast<std::size_t>(interval.size()));
  for (int i = interval.a; i <= interval.b; ++i) {
    entries[static_cast<std::size_t>(i - interval.a)] = end_weighted_draw(t, u, i - interval.a, rng.uniform());
  }
  return decode_insertion(LehmerSeq(interval, std::move(entries), CodeKind::insertion));
}

ConstraintGraph gamma_from_lehmer(Interval window, std::span<const int> ell) {
  if (static_cast<int>(ell.size()) != window.size() || window.size() < 2) {
    throw std::invalid_argument("gamma_from_lehmer: need at least two entries matching the window");
  }
  if (ell.front() != 0 || ell.back() != 0) {
    throw std::invalid_argument("gamma_from_lehmer: window endpoints must be zeros of the sequence");
  }
  if (std::any_of(ell.begin(), ell.end(), [](int v) { return v < 0; })) {
    throw std::invalid_argument("gamma_from_lehmer: entries must be non-negative");
  }
  ConstraintGraph g{window, {}};
  std::size_t start = 0;
  for (std::size_t i = 1; i < ell.size(); ++i) {
    if (ell[i] != 0) continue;
    const Interval block{window.a + static_cast<int>(start), window.a + static_cast<int>(i)};
    const auto arrival = compose_decrements(block, ell.subspan(start, i - start + 1));
    const ConstraintGraph part = constraint_graph(block, arrival);
    g.arcs.insert(g.arcs.end(), part.arcs.begin(), part.arcs.end());
    start = i;
  }
  std::sort(g.arcs.begin(), g.arcs.end());
  return g;
}

Word uniform_coloring(const ConstraintGraph& g, int q, SplitMix64& rng) {
  if (q < 3) {
    throw std::invalid_argument("uniform_coloring needs q >= 3");
  }
  const Interval iv = g.interval;
  const int base = iv.a;
  std::vector<int> x(static_cast<std::size_t>(iv.size()), 0);
  if (iv.empty()) return Word(iv, {}, q);
  const auto adj = g.adjacency();
  const auto ends = bubble_endpoints(g);
  if (ends.front() != iv.a || ends.back() != iv.b) {
    throw std::invalid_argument("uniform_coloring: window endpoints must be bubble endpoints");
  }
  auto at = [&](int v) -> int& { return x[static_cast<std::size_t>(v - base)]; };
  at(ends[0]) = rng.below(q) + 1;
  for (std::size_t e = 1; e < ends.size(); ++e) {
    const int a = ends[e - 1];
    const int b = ends[e];
    if (!arc_between(adj, base, a, b)) {
      throw std::invalid_argument("uniform_coloring: consecutive bubble endpoints must be adjacent");
    }
    at(b) = other_color(q, at(a), rng);
    // Eliminate interior vertices of degree 2 whose neighbours are adjacent;
    // colouring in reverse gives every vertex exactly q-2 choices.
    std::vector<int> degree(static_cast<std::size_t>(b - a + 1));
    std::vector<char> alive(degree.size(), 1);
    std::vector<int> queue;
    for (int v = a + 1; v < b; ++v) {
      degree[static_cast<std::size_t>(v - a)] = static_cast<int>(adj[static_cast<std::size_t>(v - base)].size());
      if (degree[static_cast<std::size_t>(v - a)] == 2) queue.push_back(v);
    }
    struct Step {
      int v, n1, n2;
    };
    std::vector<Step> steps;
    while (!queue.empty()) {
      const int v = queue.back();
      queue.pop_back();
      if (!alive[static_cast<std::size_t>(v - a)] || degree[static_cast<std::size_t>(v - a)] != 2) continue;
      int nb[2];
      int found = 0;
      for (int w : adj[static_cast<std::size_t>(v - base)]) {
        if (alive[static_cast<std::size_t>(w - a)] && found < 2) nb[found++] = w;
      }
      if (found != 2 || !arc_between(adj, base, nb[0], nb[1])) continue;
      alive[static_cast<std::size_t>(v - a)] = 0;
      steps.push_back({v, nb[0], nb[1]});
      for (int w : nb) {
        int& d = degree[static_cast<std::size_t>(w - a)];
        --d;
        if (w != a && w != b && d == 2) queue.push_back(w);
      }
    }
    if (static_cast<int>(steps.size()) != b - a - 1) {
      throw std::invalid_argument("uniform_coloring: bubble is not a triangulated polygon");
    }
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      at(it->v) = other_color(q, at(it->n1), at(it->n2), rng);
    }
  }
  return Word(iv, std::move(x), q);
}

ColoringSample painting_sample(int q, int k, Interval window, std::uint64_t seed) {
  return painting_sample(coloring_params(q, k), window, seed);
}

ColoringSample painting_sample(const ColoringParams& p, Interval window, std::uint64_t seed) {
  if (p.q < 3 || !(p.t > 0 && p.t < 1) || !(p.s > 0 && p.s < 1)) {
    throw std::invalid_argument("painting_sample needs q >= 3, 0 < t < 1 and 0 < s < 1");
  }
  require_window(window);
  const int q = p.q;
  const std::uint64_t key = stream_key(seed, Purpose::painting);
  const double density = p.endpoint_density();
  SiteField<std::uint8_t> endpoint(
      [key, density](std::int64_t first, std::size_t n, std::uint8_t* out) {
        std::vector<double> u(n);
        simd::kernels().site_uniforms(key, first, 0, u.data(), n);
        simd::kernels().below_threshold(u.data(), density, out, n);
      },
      window.a, window.b);
  auto on = [](std::uint8_t b) { return b != 0; };
  const std::int64_t left = find_left(endpoint, window.a, on, window, "painting_sample");
  const std::int64_t right = find_right(endpoint, window.b, on, window, "painting_sample");

  std::vector<int> x(idx(right, left) + 1, 0);
  std::vector<std::int64_t> ends;
  SplitMix64 walk(site_word(key, left, 1));
  for (std::int64_t i = left; i <= right; ++i) {
    if (!endpoint[i]) continue;
    x[idx(i, left)] = ends.empty() ? walk.below(q) + 1 : other_color(q, x[idx(ends.back(), left)], walk);
    ends.push_back(i);
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> stack;
  for (std::size_t e = 1; e < ends.size(); ++e) {
    SplitMix64 rng(site_word(key, ends[e - 1], 2));
    stack.emplace_back(ends[e - 1], ends[e]);
    while (!stack.empty()) {
      const auto [a, b] = stack.back();
      stack.pop_back();
      const int m = static_cast<int>(b - a - 1);
      if (m <= 0) continue;
      const std::int64_t kk = a + 1 + truncated_draw(p.t, m, rng.uniform());
      x[idx(kk, left)] = other_color(q, x[idx(a, left)], x[idx(b, left)], rng);
      stack.emplace_back(kk, b);
      stack.emplace_back(a, kk);
    }
  }

  ColoringSample out = make_sample(p, window, seed, Method::painting);
  std::vector<std::uint8_t> mask(out.colors.size());
  for (int i = window.a; i <= window.b; ++i) {
    out.colors[idx(i, window.a)] = x[idx(i, left)];
    mask[idx(i, window.a)] = endpoint[i];
  }
  out.endpoint_mask = std::move(mask);
  return out;
}

ColoringSample lehmer_pipeline_sample(int q, int k, Interval window, std::uint64_t seed) {
  const ColoringParams& p = coloring_params(q, k);
  require_window(window);
  const std::uint64_t key = stream_key(seed, Purpose::lehmer);
  SiteField<std::int32_t> ell = lehmer_field(p, key, 0, window);
  auto zero = [](std::int32_t v) { return v == 0; };
  const std::int64_t left = find_left(ell, window.a, zero, window, "lehmer_pipeline_sample");
  std::int64_t right = find_right(ell, window.b, zero, window, "lehmer_pipeline_sample");
  if (right == left) {
    right = find_right(ell, left + 1, zero, window, "lehmer_pipeline_sample");
  }
  std::vector<int> entries(idx(right, left) + 1);
  for (std::int64_t i = left; i <= right; ++i) entries[idx(i, left)] = ell[i];
  const Interval extended{static_cast<int>(left), static_cast<int>(right)};
  SplitMix64 rng(site_word(key, left, 1));
  const Word colored = uniform_coloring(gamma_from_lehmer(extended, entries), q, rng);

  ColoringSample out = make_sample(p, window, seed, Method::lehmer);
  std::vector<std::uint8_t> mask(out.colors.size());
  std::vector<int> lw(out.colors.size());
  for (int i = window.a; i <= window.b; ++i) {
    out.colors[idx(i, window.a)] = colored.at(i);
    lw[idx(i, window.a)] = ell[i];
    mask[idx(i, window.a)] = ell[i] == 0;
  }
  out.endpoint_mask = std::move(mask);
  out.lehmer = std::move(lw);
  return out;
}

ColoringSample ffiid_sample(int q, int k, Interval window, std::uint64_t seed) {
  const ColoringParams& p = coloring_params(q, k);
  require_window(window);
  const std::uint64_t key = stream_key(seed, Purpose::ffiid);
  SiteField<std::int32_t> ell = lehmer_field(p, key, 2, window);
  auto zero = [](std::int32_t v) { return v == 0; };
  const char* what = "ffiid_sample";
  const std::int64_t left = find_left(ell, window.a, zero, window, what);
  const std::int64_t right = find_right(ell, window.b, zero, window, what);

  // Z_i: uniform ordered pair of distinct colors.
  auto z_pair = [&](std::int64_t site) {
    const std::uint64_t w = site_word(key, site, 0);
    const int z1 = static_cast<int>(((w >> 32) * static_cast<std::uint64_t>(q)) >> 32) + 1;
    int z2 = static_cast<int>(((w & 0xffffffffULL) * static_cast<std::uint64_t>(q - 1)) >> 32) + 1;
    if (z2 >= z1) ++z2;
    return std::pair{z1, z2};
  };
  auto escapes = [&](std::int64_t site, std::int64_t prev) {
    const auto [a1, a2] = z_pair(prev);
    const int c = z_pair(site).first;
    return c != a1 && c != a2;
  };

  // Zero sites from the predecessor of the last escape at or before `left`
  // through `right`.
  std::vector<std::int64_t> zs;
  std::int64_t cur = left;
  std::vector<std::int64_t> back{left};
  while (true) {
    const std::int64_t prev = find_left(ell, cur - 1, zero, window, what);
    back.push_back(prev);
    if (escapes(cur, prev)) break;
    cur = prev;
  }
  zs.assign(back.rbegin(), back.rend());
  for (std::int64_t i = left + 1; i <= right; ++i) {
    if (ell[i] == 0) zs.push_back(i);
  }

  const std::size_t nz = zs.size();
  std::vector<int> zc(nz, 0);
  std::vector<std::size_t> last(nz, 1);
  for (std::size_t m = 1; m < nz; ++m) {
    const auto [z1, z2] = z_pair(zs[m]);
    if (m == 1 || escapes(zs[m], zs[m - 1])) {
      last[m] = m;
      zc[m] = z1;
    } else {
      last[m] = last[m - 1];
      zc[m] = z1 != zc[m - 1] ? z1 : z2;
    }
  }

  std::vector<int> x(idx(right, left) + 1, 0);
  const std::size_t first = nz - static_cast<std::size_t>(std::count_if(zs.begin(), zs.end(), [&](std::int64_t z) { return z >= left; }));
  for (std::size_t m = first; m < nz; ++m) x[idx(zs[m], left)] = zc[m];
  for (std::size_t m = first; m + 1 < nz; ++m) {
    const std::int64_t a = zs[m];
    const std::int64_t b = zs[m + 1];
    std::vector<int> entries(idx(b, a) + 1);
    for (std::int64_t i = a; i <= b; ++i) entries[idx(i, a)] = ell[i];
    SplitMix64 rng(site_word(key, a, 1));
    fill_block(entries, std::span<int>(x).subspan(idx(a, left), entries.size()), q, rng);
  }

  ColoringSample out = make_sample(p, window, seed, Method::ffiid);
  const std::size_t n = out.colors.size();
  std::vector<std::uint8_t> mask(n);
  std::vector<int> lw(n);
  std::vector<int> radii(n);
  std::vector<int> hops(n, -1);
  std::size_t m = first;
  for (int i = window.a; i <= window.b; ++i) {
    while (m + 1 < nz && zs[m + 1] <= i) ++m;
    const std::size_t o = idx(i, window.a);
    out.colors[o] = x[idx(i, left)];
    lw[o] = ell[i];
    mask[o] = ell[i] == 0;
    const std::int64_t look = zs[last[m] - 1];
    if (zs[m] == i) {
      radii[o] = static_cast<int>(i - look);
      hops[o] = static_cast<int>(m - last[m]);
    } else {
      const std::int64_t look_right = zs[last[m + 1] - 1];
      radii[o] = static_cast<int>(std::max(i - std::min(look, look_right), zs[m + 1] - i));
    }
  }
  out.endpoint_mask = std::move(mask);
  out.lehmer = std::move(lw);
  out.radii = std::move(radii);
  out.lookback_hops = std::move(hops);
  return out;
}

ColoringSample sample_coloring(Method m, int q, int k, Interval window, std::uint64_t seed) {
  switch (m) {
    case Method::painting:
      return painting_sample(q, k, window, seed);
    case Method::lehmer:
      return lehmer_pipeline_sample(q, k, window, seed);
    case Method::ffiid:
      return ffiid_sample(q, k, window, seed);
  }
  throw std::invalid_argument("unknown method");
}

std::string MarkovState::key() const {
  std::ostringstream os;
  os << f_minus << ',' << f_plus << '|';
  for (auto [i, j] : graph.arcs) os << i << ':' << j << ' ';
  os << '|' << local_colors.to_string();
  return os.str();
}

MarkovState markov_state(const ColoringSample& sample, std::span<const int> ell, int site) {
  const Interval w = sample.window;
  if (static_cast<int>(ell.size()) != w.size()) {
    throw std::invalid_argument("markov_state: Lehmer entries must cover the window");
  }
  if (!w.contains(site)) {
    throw std::out_of_range("markov_state: site outside the window");
  }
  auto l = [&](int i) { return ell[idx(i, w.a)]; };
  int fm = site;
  while (fm >= w.a && l(fm) != 0) --fm;
  int fp = site + 1;
  while (fp <= w.b && l(fp) != 0) ++fp;
  if (fm < w.a || fp > w.b) {
    throw std::out_of_range("markov_state: site " + std::to_string(site) + " too close to the window boundary");
  }
  const Interval rel{fm - site, fp - site};
  const auto block = ell.subspan(idx(fm, w.a), static_cast<std::size_t>(fp - fm + 1));
  MarkovState st;
  st.site = site;
  st.f_minus = rel.a;
  st.f_plus = rel.b;
  st.graph = constraint_graph(rel, compose_decrements(rel, block));
  std::vector<int> colors(sample.colors.begin() + static_cast<std::ptrdiff_t>(idx(fm, w.a)),
                          sample.colors.begin() + static_cast<std::ptrdiff_t>(idx(fp, w.a)) + 1);
  st.local_colors = Word(rel, std::move(colors), sample.params.q);
  return st;
}

std::vector<MarkovState> markov_states(const ColoringSample& sample, std::span<const int> ell) {
  const Interval w = sample.window;
  if (static_cast<int>(ell.size()) != w.size()) {
    throw std::invalid_argument("markov_states: Lehmer entries must cover the window");
  }
  std::vector<MarkovState> out;
  int first_zero = w.b + 1;
  int last_zero = w.a - 1;
  for (int i = w.a; i <= w.b; ++i) {
    if (ell[idx(i, w.a)] == 0) {
      first_zero = std::min(first_zero, i);
      last_zero = i;
    }
  }
  for (int i = first_zero; i < last_zero; ++i) {
    out.push_back(markov_state(sample, ell, i));
  }
  return out;
}

std::vector<MarkovState> markov_states(const ColoringSample& sample) {
  if (!sample.lehmer) {
    throw std::invalid_argument("markov_states: sample carries no Lehmer entries");
  }
  return markov_states(sample, *sample.lehmer);
}

}  // namespace kdep
