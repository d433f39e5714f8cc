#include "kdep/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "kdep/building.hpp"
#include "kdep/tpoly.hpp"

namespace kdep {

namespace {

std::size_t cells_for(int q, int length) {
  std::size_t n = 1;
  for (int i = 0; i < length; ++i) n *= static_cast<std::size_t>(q);
  return n;
}

// Runs fn(shard, windows) for every shard, possibly in parallel, and merges
// the results in shard order.
template <typename Result, typename Fn>
Result run_shards(const ShardPlan& plan, Result init, Fn fn) {
  if (plan.per_shard == 0) {
    throw std::invalid_argument("shard size must be positive");
  }
  const std::uint64_t shards = (plan.windows + plan.per_shard - 1) / plan.per_shard;
  std::vector<std::optional<Result>> results(shards);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::uint64_t s = next++; s < shards; s = next++) {
      try {
        const std::uint64_t n = std::min(plan.per_shard, plan.windows - s * plan.per_shard);
        results[s] = fn(s, n);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, plan.threads);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  for (auto& r : results) {
    if constexpr (std::is_same_v<Result, std::vector<CylinderTable>>) {
      for (std::size_t i = 0; i < init.size(); ++i) init[i].merge((*r)[i]);
    } else {
      init.merge(*r);
    }
  }
  return init;
}

Interval shard_window(std::uint64_t windows, int stride) {
  return Interval{0, static_cast<int>(windows * static_cast<std::uint64_t>(stride)) - 1};
}

std::vector<CylinderTable> empty_tables(int q, int maxLen) {
  std::vector<CylinderTable> out;
  for (int len = 1; len <= maxLen; ++len) out.emplace_back(q, len);
  return out;
}

void require_stride(int stride, int span) {
  if (stride < span) {
    throw std::invalid_argument("stride " + std::to_string(stride) + " is shorter than the window span " +
                                std::to_string(span));
  }
}

}  // namespace

CylinderTable::CylinderTable(int q_, int length_) : q(q_), length(length_), counts(cells_for(q_, length_), 0) {
  if (q_ < 1 || length_ < 1 || length_ > kMaxCylinderLength) {
    throw std::invalid_argument("cylinder table needs q >= 1 and 1 <= length <= 4");
  }
}

void CylinderTable::add(const int* chars) {
  ++counts[cylinder_code(chars, length, q)];
  ++total;
}

std::uint64_t CylinderTable::count(const Word& x) const {
  if (x.size() != length || x.alphabet() != q) {
    throw std::invalid_argument("cylinder table: word shape does not match the table");
  }
  return counts[cylinder_code(x.chars().data(), length, q)];
}

void CylinderTable::merge(const CylinderTable& other) {
  if (other.q != q || other.length != length) {
    throw std::invalid_argument("cylinder tables with different shapes cannot merge");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
}

std::size_t cylinder_code(const int* chars, int length, int q) {
  std::size_t code = 0;
  for (int i = 0; i < length; ++i) code = code * static_cast<std::size_t>(q) + static_cast<std::size_t>(chars[i] - 1);
  return code;
}

Word cylinder_word(std::size_t code, int length, int q) {
  std::vector<int> chars(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    chars[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::size_t>(q)) + 1;
    code /= static_cast<std::size_t>(q);
  }
  return Word(Interval{1, length}, std::move(chars), q);
}

std::vector<CylinderTable> estimate_cylinders(const ColoringSample& sample, int maxLen, int stride, int offset) {
  if (maxLen < 1 || maxLen > kMaxCylinderLength) {
    throw std::invalid_argument("estimate_cylinders needs 1 <= maxLen <= 4");
  }
  if (stride < 1 || offset < 0) {
    throw std::invalid_argument("estimate_cylinders needs stride >= 1 and offset >= 0");
  }
  const int q = sample.params.q;
  std::vector<CylinderTable> out = empty_tables(q, maxLen);
  const int n = static_cast<int>(sample.colors.size());
  const int* x = sample.colors.data();
  if (stride == 1) {
    for (int len = 1; len <= maxLen; ++len) {
      for (int p = offset; p + len <= n; ++p) out[static_cast<std::size_t>(len - 1)].add(x + p);
    }
    return out;
  }
  for (int p = offset; p + maxLen <= n; p += stride) {
    for (int len = 1; len <= maxLen; ++len) out[static_cast<std::size_t>(len - 1)].add(x + p);
  }
  return out;
}

std::vector<double> exact_cylinder_law(int q, int k, int length) {
  const AlgebraicT root = solve_tuning(q, k, parse_rational("1e-30"));
  std::vector<double> law(cells_for(q, length));
  for (std::size_t c = 0; c < law.size(); ++c) {
    const Word w = cylinder_word(c, length, q);
    if (w.is_proper()) law[c] = to_double(value_at(cylinder_prob(w, root)).approx);
  }
  return law;
}

std::vector<double> exact_cylinder_law(int q, const Rational& t, int length) {
  std::vector<double> law(cells_for(q, length));
  for (std::size_t c = 0; c < law.size(); ++c) {
    const Word w = cylinder_word(c, length, q);
    if (w.is_proper()) law[c] = to_double(*value_at(cylinder_prob(w, t)).exact);
  }
  return law;
}

void to_json(nlohmann::json& j, const TestReport& r) {
  j = nlohmann::json{{"name", r.name},
                     {"statistic", r.statistic},
                     {"pass", r.pass},
                     {"threshold", r.threshold},
                     {"sampleSize", r.sample_size}};
  if (r.p_value) j["pValue"] = *r.p_value;
  if (r.sigma_distance) j["sigmaDistance"] = *r.sigma_distance;
  if (!r.note.empty()) j["note"] = r.note;
}

void from_json(const nlohmann::json& j, TestReport& r) {
  r = TestReport{};
  j.at("name").get_to(r.name);
  j.at("statistic").get_to(r.statistic);
  j.at("pass").get_to(r.pass);
  j.at("threshold").get_to(r.threshold);
  j.at("sampleSize").get_to(r.sample_size);
  if (j.contains("pValue")) r.p_value = j.at("pValue").get<double>();
  if (j.contains("sigmaDistance")) r.sigma_distance = j.at("sigmaDistance").get<double>();
  if (j.contains("note")) j.at("note").get_to(r.note);
}

double chi_square_sf(double statistic, double df) {
  if (df <= 0) return 1.0;
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(df / 2, statistic / 2);
}

TestReport chi_square_against_exact(const CylinderTable& table, const std::vector<double>& exact,
                                    const std::string& name) {
  if (table.total == 0) {
    throw std::invalid_argument("chi_square_against_exact: empty table");
  }
  if (exact.size() != table.cells()) {
    throw std::invalid_argument("chi_square_against_exact: exact law size does not match the table");
  }
  TestReport r;
  r.name = name;
  r.threshold = kPassP;
  r.sample_size = table.total;
  const double n = static_cast<double>(table.total);
  double stat = 0;
  int positive = 0;
  std::uint64_t impossible = 0;
  for (std::size_t c = 0; c < exact.size(); ++c) {
    const double o = static_cast<double>(table.counts[c]);
    if (exact[c] <= 0) {
      impossible += table.counts[c];
      continue;
    }
    ++positive;
    const double e = n * exact[c];
    stat += (o - e) * (o - e) / e;
  }
  r.statistic = stat;
  r.p_value = impossible ? 0.0 : chi_square_sf(stat, positive - 1);
  if (impossible) r.note = std::to_string(impossible) + " windows in cells of exact mass 0";
  r.pass = *r.p_value > kPassP;
  return r;
}

TestReport two_sample_chi_square(const CylinderTable& a, const CylinderTable& b, const std::string& name) {
  if (a.q != b.q || a.length != b.length) {
    throw std::invalid_argument("two_sample_chi_square: table shapes differ");
  }
  if (a.total == 0 || b.total == 0) {
    throw std::invalid_argument("two_sample_chi_square: empty table");
  }
  const double n1 = static_cast<double>(a.total);
  const double n2 = static_cast<double>(b.total);
  const double k1 = std::sqrt(n2 / n1);
  const double k2 = std::sqrt(n1 / n2);
  double stat = 0;
  int used = 0;
  for (std::size_t c = 0; c < a.cells(); ++c) {
    const double o1 = static_cast<double>(a.counts[c]);
    const double o2 = static_cast<double>(b.counts[c]);
    if (o1 + o2 == 0) continue;
    ++used;
    const double d = k1 * o1 - k2 * o2;
    stat += d * d / (o1 + o2);
  }
  TestReport r;
  r.name = name;
  r.statistic = stat;
  r.p_value = chi_square_sf(stat, used - 1);
  r.threshold = kPassP;
  r.sample_size = std::min(a.total, b.total);
  r.pass = *r.p_value > kPassP;
  return r;
}

PairTable::PairTable(int q_, int gap_) : q(q_), gap(gap_), counts(static_cast<std::size_t>(q_ * q_), 0) {
  if (q_ < 1 || gap_ < 1) {
    throw std::invalid_argument("pair table needs q >= 1 and gap >= 1");
  }
}

void PairTable::merge(const PairTable& other) {
  if (other.q != q || other.gap != gap) {
    throw std::invalid_argument("pair tables with different shapes cannot merge");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
}

PairTable count_pairs(const ColoringSample& sample, int gap, int stride, int offset) {
  if (stride < 1 || offset < 0) {
    throw std::invalid_argument("count_pairs needs stride >= 1 and offset >= 0");
  }
  PairTable t(sample.params.q, gap);
  const int n = static_cast<int>(sample.colors.size());
  for (int p = offset; p + gap < n; p += stride) {
    t.add(sample.colors[static_cast<std::size_t>(p)], sample.colors[static_cast<std::size_t>(p + gap)]);
  }
  return t;
}

TestReport independence_defect(const PairTable& table, Expectation mode, const std::string& name) {
  if (table.total == 0) {
    throw std::invalid_argument("independence_defect: empty table");
  }
  const int q = table.q;
  const double n = static_cast<double>(table.total);
  std::vector<double> row(static_cast<std::size_t>(q), 0.0);
  std::vector<double> col(static_cast<std::size_t>(q), 0.0);
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const double c = static_cast<double>(table.counts[static_cast<std::size_t>(a * q + b)]);
      row[static_cast<std::size_t>(a)] += c / n;
      col[static_cast<std::size_t>(b)] += c / n;
    }
  }
  double tv = 0;
  double mean_tv = 0;
  double chi = 0;
  int df_rows = 0;
  int df_cols = 0;
  for (int a = 0; a < q; ++a) df_rows += row[static_cast<std::size_t>(a)] > 0;
  for (int b = 0; b < q; ++b) df_cols += col[static_cast<std::size_t>(b)] > 0;
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const double prod = row[static_cast<std::size_t>(a)] * col[static_cast<std::size_t>(b)];
      const double p = static_cast<double>(table.counts[static_cast<std::size_t>(a * q + b)]) / n;
      tv += 0.5 * std::abs(p - prod);
      mean_tv += 0.5 * std::sqrt(prod * (1 - prod) / n) * std::sqrt(2 / std::numbers::pi);
      if (prod > 0) chi += n * (p - prod) * (p - prod) / prod;
    }
  }
  const double envelope = 4 * mean_tv;
  const double chi_p = chi_square_sf(chi, static_cast<double>((df_rows - 1) * (df_cols - 1)));
  TestReport r;
  r.name = name;
  r.statistic = tv;
  r.threshold = envelope;
  r.sample_size = table.total;
  r.sigma_distance = envelope > 0 ? 4 * tv / envelope : 0.0;
  r.p_value = chi_p;
  if (mode == Expectation::independent) {
    r.pass = tv <= envelope;
    r.note = "independent: TV within the 4-sigma envelope";
  } else {
    r.pass = tv > envelope && chi_p < kFailP;
    r.note = "required-fail: TV beyond the 4-sigma envelope and chi-square p < 1e-6";
  }
  return r;
}

TailFit tail_fit(const std::map<int, std::uint64_t>& counts, int nMin, int nMax, std::uint64_t minCount) {
  std::uint64_t total = 0;
  for (const auto& [v, c] : counts) total += c;
  if (total == 0) {
    throw InsufficientData("tail_fit: no observations");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (int n = nMin; n <= nMax; ++n) {
    std::uint64_t tail = 0;
    for (auto it = counts.lower_bound(n); it != counts.end(); ++it) tail += it->second;
    if (tail < minCount || tail == 0) continue;
    xs.push_back(n);
    ys.push_back(std::log(static_cast<double>(tail) / static_cast<double>(total)));
  }
  if (xs.size() < 5) {
    throw InsufficientData("tail_fit: " + std::to_string(xs.size()) + " usable tail points in [" +
                           std::to_string(nMin) + ", " + std::to_string(nMax) + "], need 5");
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  TailFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.points = static_cast<int>(xs.size());
  return fit;
}

std::vector<CylinderTable> sample_cylinders(Method method, int q, int k, int maxLen, int stride, const ShardPlan& plan) {
  require_stride(stride, maxLen);
  return run_shards(plan, empty_tables(q, maxLen), [&](std::uint64_t shard, std::uint64_t n) {
    const ColoringSample s = sample_coloring(method, q, k, shard_window(n, stride), derive_seed(plan.seed, shard));
    return estimate_cylinders(s, maxLen, stride);
  });
}

std::vector<CylinderTable> sample_cylinders(const ColoringParams& params, int maxLen, int stride, const ShardPlan& plan) {
  require_stride(stride, maxLen);
  return run_shards(plan, empty_tables(params.q, maxLen), [&](std::uint64_t shard, std::uint64_t n) {
    const ColoringSample s = painting_sample(params, shard_window(n, stride), derive_seed(plan.seed, shard));
    return estimate_cylinders(s, maxLen, stride);
  });
}

PairTable sample_pairs(Method method, int q, int k, int gap, int stride, const ShardPlan& plan) {
  require_stride(stride, gap + 1);
  return run_shards(plan, PairTable(q, gap), [&](std::uint64_t shard, std::uint64_t n) {
    const ColoringSample s = sample_coloring(method, q, k, shard_window(n, stride), derive_seed(plan.seed, shard));
    return count_pairs(s, gap, stride);
  });
}

}  // namespace kdep
