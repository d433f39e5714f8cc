#include "kdep/perm.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace kdep {

namespace {

std::size_t off(Interval interval, int i) { return static_cast<std::size_t>(i - interval.a); }

void require_same_interval(Interval x, Interval y, const char* what) {
  if (!(x == y)) {
    throw std::invalid_argument(std::string(what) + ": interval mismatch [" + std::to_string(x.a) + "," +
                                std::to_string(x.b) + "] vs [" + std::to_string(y.a) + "," + std::to_string(y.b) + "]");
  }
}

}  // namespace

Perm::Perm(Interval interval, std::vector<int> image) : interval_(interval), image_(std::move(image)) {
  if (interval_.size() < 0 || static_cast<int>(image_.size()) != interval_.size()) {
    throw std::invalid_argument("permutation image length does not match its interval");
  }
  inverse_.assign(image_.size(), interval_.a - 1);
  for (std::size_t p = 0; p < image_.size(); ++p) {
    const int v = image_[p];
    if (!interval_.contains(v) || inverse_[off(interval_, v)] != interval_.a - 1) {
      throw std::invalid_argument("permutation image is not a bijection of its interval");
    }
    inverse_[off(interval_, v)] = interval_.a + static_cast<int>(p);
  }
}

Perm Perm::identity(Interval interval) {
  std::vector<int> image(static_cast<std::size_t>(std::max(interval.size(), 0)));
  std::iota(image.begin(), image.end(), interval.a);
  return Perm(interval, std::move(image));
}

Perm Perm::swap_times(int k) const {
  if (!interval_.contains(k) || !interval_.contains(k + 1)) {
    throw std::invalid_argument("swap_times: k and k+1 must lie in the interval");
  }
  std::vector<int> image = image_;
  std::swap(image[off(interval_, inverse(k))], image[off(interval_, inverse(k + 1))]);
  return Perm(interval_, std::move(image));
}

Perm Perm::swap_positions(int r, int s) const {
  if (!interval_.contains(r) || !interval_.contains(s)) {
    throw std::invalid_argument("swap_positions: positions must lie in the interval");
  }
  std::vector<int> image = image_;
  std::swap(image[off(interval_, r)], image[off(interval_, s)]);
  return Perm(interval_, std::move(image));
}

LehmerSeq::LehmerSeq(Interval iv, std::vector<int> e, CodeKind k) : interval(iv), entries(std::move(e)), kind(k) {
  if (interval.size() < 0 || static_cast<int>(entries.size()) != interval.size()) {
    throw std::invalid_argument("code length does not match its interval");
  }
  for (int i = interval.a; i <= interval.b; ++i) {
    const int bound = kind == CodeKind::lehmer ? interval.b - i : i - interval.a;
    const int v = at(i);
    if (v < 0 || v > bound) {
      throw std::invalid_argument("code entry " + std::to_string(v) + " at " + std::to_string(i) + " outside [0," +
                                  std::to_string(bound) + "]");
    }
  }
}

bool ConstraintGraph::has_arc(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(arcs.begin(), arcs.end(), std::pair{i, j});
}

std::vector<std::vector<int>> ConstraintGraph::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(std::max(interval.size(), 0)));
  for (auto [i, j] : arcs) {
    adj[off(interval, i)].push_back(j);
    adj[off(interval, j)].push_back(i);
  }
  for (auto& n : adj) std::sort(n.begin(), n.end());
  return adj;
}

long inversions(const Perm& sigma) {
  long count = 0;
  const auto& img = sigma.image();
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (std::size_t j = i + 1; j < img.size(); ++j) {
      count += img[i] > img[j];
    }
  }
  return count;
}

LehmerSeq lehmer_code(const Perm& sigma) {
  const auto& img = sigma.image();
  std::vector<int> code(img.size(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (std::size_t j = i + 1; j < img.size(); ++j) {
      code[i] += img[j] < img[i];
    }
  }
  return LehmerSeq(sigma.interval(), std::move(code), CodeKind::lehmer);
}

LehmerSeq insertion_code(const Perm& sigma) {
  const LehmerSeq l = lehmer_code(sigma);
  const Interval iv = sigma.interval();
  std::vector<int> code(static_cast<std::size_t>(iv.size()));
  for (int time = iv.a; time <= iv.b; ++time) {
    code[off(iv, time)] = l.at(sigma.inverse(time));
  }
  return LehmerSeq(iv, std::move(code), CodeKind::insertion);
}

Perm decode_lehmer(const LehmerSeq& code) {
  if (code.kind != CodeKind::lehmer) {
    throw std::invalid_argument("decode_lehmer needs a Lehmer-kind code");
  }
  const Interval iv = code.interval;
  std::vector<int> unused(static_cast<std::size_t>(iv.size()));
  std::iota(unused.begin(), unused.end(), iv.a);
  std::vector<int> image;
  image.reserve(unused.size());
  for (int e : code.entries) {
    const auto it = unused.begin() + e;
    image.push_back(*it);
    unused.erase(it);
  }
  return Perm(iv, std::move(image));
}

Perm decode_insertion(const LehmerSeq& code) {
  if (code.kind != CodeKind::insertion) {
    throw std::invalid_argument("decode_insertion needs an insertion-kind code");
  }
  const Interval iv = code.interval;
  std::vector<int> times;
  times.reserve(static_cast<std::size_t>(iv.size()));
  for (int time = iv.a; time <= iv.b; ++time) {
    const auto at = static_cast<std::ptrdiff_t>(times.size()) - code.at(time);
    times.insert(times.begin() + at, time);
  }
  return Perm(iv, std::move(times));
}

std::vector<long> compose_decrements(Interval interval, std::span<const int> entries) {
  if (static_cast<int>(entries.size()) != interval.size()) {
    throw std::invalid_argument("compose_decrements: entry count does not match the interval");
  }
  std::vector<long> image(entries.size());
  for (int j = interval.a; j <= interval.b; ++j) {
    long x = j;
    for (int i = interval.b; i >= interval.a; --i) {
      const long hi = static_cast<long>(i) + entries[off(interval, i)];
      if (x == i) {
        x = hi;
      } else if (x > i && x <= hi) {
        --x;
      }
    }
    image[off(interval, j)] = x;
  }
  return image;
}

std::vector<int> founders(const Perm& sigma) {
  const Interval iv = sigma.interval();
  const int n = iv.size();
  std::vector<char> mark(static_cast<std::size_t>(std::max(n, 0)), 0);
  int best = std::numeric_limits<int>::max();
  for (int i = iv.a; i <= iv.b; ++i) {
    if (sigma(i) < best) {
      best = sigma(i);
      mark[off(iv, i)] = 1;
    }
  }
  best = std::numeric_limits<int>::max();
  for (int i = iv.b; i >= iv.a; --i) {
    if (sigma(i) < best) {
      best = sigma(i);
      mark[off(iv, i)] = 1;
    }
  }
  std::vector<int> out;
  for (int i = iv.a; i <= iv.b; ++i) {
    if (mark[off(iv, i)]) out.push_back(i);
  }
  return out;
}

ConstraintGraph constraint_graph(Interval interval, std::span<const long> arrival) {
  if (static_cast<int>(arrival.size()) != interval.size()) {
    throw std::invalid_argument("constraint_graph: arrival count does not match the interval");
  }
  ConstraintGraph g{interval, {}};
  const std::size_t n = arrival.size();
  for (std::size_t i = 0; i < n; ++i) {
    long gate = std::numeric_limits<long>::max();
    for (std::size_t j = i + 1; j < n; ++j) {
      if (gate > std::max(arrival[i], arrival[j])) {
        g.arcs.emplace_back(interval.a + static_cast<int>(i), interval.a + static_cast<int>(j));
      }
      gate = std::min(gate, arrival[j]);
      if (gate < arrival[i]) {
        break;
      }
    }
  }
  return g;
}

ConstraintGraph constraint_graph(const Perm& sigma) {
  std::vector<long> arrival(sigma.image().begin(), sigma.image().end());
  return constraint_graph(sigma.interval(), arrival);
}

std::vector<int> bubble_endpoints(const ConstraintGraph& g) {
  std::vector<int> reach(static_cast<std::size_t>(std::max(g.interval.size(), 0)), std::numeric_limits<int>::min());
  for (auto [i, j] : g.arcs) {
    int& r = reach[off(g.interval, i)];
    r = std::max(r, j);
  }
  std::vector<int> out;
  int spanned = std::numeric_limits<int>::min();
  for (int v = g.interval.a; v <= g.interval.b; ++v) {
    if (spanned <= v) {
      out.push_back(v);
    }
    spanned = std::max(spanned, reach[off(g.interval, v)]);
  }
  return out;
}

std::vector<std::pair<int, int>> bubbles(const ConstraintGraph& g) {
  const std::vector<int> ends = bubble_endpoints(g);
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 1; i < ends.size(); ++i) {
    out.emplace_back(ends[i - 1], ends[i]);
  }
  return out;
}

bool is_proper_coloring(const ConstraintGraph& g, const Word& x) {
  require_same_interval(g.interval, x.interval(), "is_proper_coloring");
  return std::all_of(g.arcs.begin(), g.arcs.end(), [&](const auto& arc) { return x.at(arc.first) != x.at(arc.second); });
}

Integer color_count(const ConstraintGraph& g, int q) {
  if (q < 3) {
    throw std::invalid_argument("color_count needs q >= 3");
  }
  const int n = g.interval.size();
  if (n <= 0) {
    return n == 0 ? Integer(1) : Integer(0);
  }
  const auto nbub = static_cast<unsigned>(bubbles(g).size());
  Integer result = q;
  result *= boost::multiprecision::pow(Integer(q - 2), static_cast<unsigned>(n - 1) - nbub);
  result *= boost::multiprecision::pow(Integer(q - 1), nbub);
  return result;
}

Integer color_count_brute(const ConstraintGraph& g, int q, int cap) {
  const int n = g.interval.size();
  if (n > cap) {
    throw std::invalid_argument("color_count_brute: " + std::to_string(n) + " vertices exceeds cap " +
                                std::to_string(cap));
  }
  std::vector<std::vector<int>> earlier(static_cast<std::size_t>(std::max(n, 0)));
  for (auto [i, j] : g.arcs) {
    earlier[off(g.interval, j)].push_back(static_cast<int>(off(g.interval, i)));
  }
  std::vector<int> color(static_cast<std::size_t>(std::max(n, 0)), 0);
  std::uint64_t count = 0;
  std::function<void(int)> dfs = [&](int v) {
    if (v == n) {
      ++count;
      return;
    }
    for (int c = 1; c <= q; ++c) {
      bool ok = true;
      for (int u : earlier[static_cast<std::size_t>(v)]) {
        if (color[static_cast<std::size_t>(u)] == c) {
          ok = false;
          break;
        }
      }
      if (ok) {
        color[static_cast<std::size_t>(v)] = c;
        dfs(v + 1);
      }
    }
  };
  dfs(0);
  return Integer(count);
}

bool is_proper_building(const Perm& sigma, const Word& x) {
  require_same_interval(sigma.interval(), x.interval(), "is_proper_building");
  std::set<int> arrived;
  const Interval iv = sigma.interval();
  for (int time = iv.a; time <= iv.b; ++time) {
    const int pos = sigma.inverse(time);
    const auto [it, inserted] = arrived.insert(pos);
    if (it != arrived.begin() && x.at(*std::prev(it)) == x.at(pos)) {
      return false;
    }
    if (std::next(it) != arrived.end() && x.at(*std::next(it)) == x.at(pos)) {
      return false;
    }
  }
  return true;
}

void for_each_permutation(Interval interval, const std::function<void(const Perm&)>& f, int cap) {
  if (interval.size() > cap) {
    throw std::invalid_argument("for_each_permutation: size " + std::to_string(interval.size()) + " exceeds cap " +
                                std::to_string(cap));
  }
  std::vector<int> image(static_cast<std::size_t>(std::max(interval.size(), 0)));
  std::iota(image.begin(), image.end(), interval.a);
  do {
    f(Perm(interval, image));
  } while (std::next_permutation(image.begin(), image.end()));
}

}  // namespace kdep
