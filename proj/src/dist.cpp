#include "kdep/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kdep/simd/kernels.hpp"

namespace kdep {

namespace {

bool finite(GeomVariant v) { return v != GeomVariant::zero_weighted_infinite; }

// u-weight carried by value j.
template <typename Real>
bool weighted(const GeomSpec<Real>& spec, long j) {
  switch (spec.variant) {
    case GeomVariant::truncated:
      return false;
    case GeomVariant::zero_weighted_truncated:
    case GeomVariant::zero_weighted_infinite:
      return j == 0;
    case GeomVariant::max_weighted_truncated:
      return j == spec.trunc;
    case GeomVariant::end_weighted_truncated:
      return j == 0 || j == spec.trunc;
  }
  return false;
}

template <typename Real>
Real ipow(Real x, long e) {
  Real r = 1;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

template <typename Real>
Real weight(const GeomSpec<Real>& spec, long j) {
  Real w = ipow(spec.t, j);
  if (weighted(spec, j)) w *= spec.u;
  return w;
}

template <typename Real>
Real total_weight(const GeomSpec<Real>& spec) {
  if (!finite(spec.variant)) {
    return spec.u + spec.t / (1 - spec.t);
  }
  Real sum = 0;
  for (long j = 0; j <= spec.trunc; ++j) sum += weight(spec, j);
  return sum;
}

template <typename Real>
void validate_impl(const GeomSpec<Real>& spec) {
  if (!(spec.t >= 0 && spec.t < 1)) {
    throw std::invalid_argument("geometric spec needs 0 <= t < 1");
  }
  if (!(spec.u >= 0)) {
    throw std::invalid_argument("geometric spec needs u >= 0");
  }
  if (spec.trunc < 0) {
    throw std::invalid_argument("geometric spec needs trunc >= 0");
  }
  if (!(total_weight(spec) > 0)) {
    throw std::invalid_argument("geometric spec has zero total weight");
  }
}

template <typename Real>
Real pmf_impl(const GeomSpec<Real>& spec, long j) {
  validate_impl(spec);
  if (j < 0 || (finite(spec.variant) && j > spec.trunc)) {
    throw std::out_of_range("geometric pmf: value " + std::to_string(j) + " outside the support");
  }
  return weight(spec, j) / total_weight(spec);
}

template <typename Real>
Real cdf_impl(const GeomSpec<Real>& spec, long j) {
  validate_impl(spec);
  if (j < 0) return 0;
  if (finite(spec.variant)) {
    if (j >= spec.trunc) return 1;
    Real sum = 0;
    for (long i = 0; i <= j; ++i) sum += weight(spec, i);
    return sum / total_weight(spec);
  }
  // u + t + ... + t^j = u + t (1 - t^j) / (1 - t).
  return (spec.u + spec.t * (1 - ipow(spec.t, j)) / (1 - spec.t)) / total_weight(spec);
}

}  // namespace

const char* variant_name(GeomVariant v) {
  switch (v) {
    case GeomVariant::truncated:
      return "truncated";
    case GeomVariant::zero_weighted_truncated:
      return "zeroWeightedTruncated";
    case GeomVariant::max_weighted_truncated:
      return "maxWeightedTruncated";
    case GeomVariant::end_weighted_truncated:
      return "endWeightedTruncated";
    case GeomVariant::zero_weighted_infinite:
      return "zeroWeightedInfinite";
  }
  return "";
}

GeomVariant parse_variant(const std::string& name) {
  for (GeomVariant v : {GeomVariant::truncated, GeomVariant::zero_weighted_truncated,
                        GeomVariant::max_weighted_truncated, GeomVariant::end_weighted_truncated,
                        GeomVariant::zero_weighted_infinite}) {
    if (name == variant_name(v)) return v;
  }
  throw std::invalid_argument("unknown geometric variant '" + name + "'");
}

void validate(const ExactGeomSpec& spec) { validate_impl(spec); }
void validate(const FloatGeomSpec& spec) { validate_impl(spec); }

Rational pmf(const ExactGeomSpec& spec, long j) { return pmf_impl(spec, j); }
double pmf(const FloatGeomSpec& spec, long j) { return pmf_impl(spec, j); }
Rational cdf(const ExactGeomSpec& spec, long j) { return cdf_impl(spec, j); }
double cdf(const FloatGeomSpec& spec, long j) { return cdf_impl(spec, j); }

GeomSampler::GeomSampler(const FloatGeomSpec& spec) : spec_(spec) {
  validate_impl(spec);
  const double total = total_weight(spec);
  const std::size_t limit = finite(spec.variant) ? static_cast<std::size_t>(spec.trunc) + 1 : kMaxTable;
  const double target = 1.0 - std::ldexp(1.0, -53);
  double sum = 0;
  for (std::size_t j = 0; j < limit; ++j) {
    sum += weight(spec, static_cast<long>(j));
    cdf_.push_back(std::min(sum / total, 1.0));
    if (cdf_.back() >= target) break;
  }
  cdf_.back() = 1.0;
}

int GeomSampler::draw(double u) const {
  return static_cast<int>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

void GeomSampler::draw(const double* u, std::int32_t* out, std::size_t n) const {
  simd::kernels().inverse_cdf(cdf_.data(), cdf_.size(), u, out, n);
}

int sample(const FloatGeomSpec& spec, SplitMix64& rng) { return GeomSampler(spec)(rng); }

DominanceReport dominance_check(double s, double t, double u, int nMax) {
  if (!(0 < t && t < s && s < 1)) {
    throw std::invalid_argument("dominance_check needs 0 < t < s < 1");
  }
  if (!(u >= 1)) {
    throw std::invalid_argument("dominance_check needs u >= 1");
  }
  if (nMax < 1) {
    throw std::invalid_argument("dominance_check needs nMax >= 1");
  }
  DominanceReport report;
  report.n0 = std::log(u * (1 - t) / (1 - s)) / std::log(s / t);
  const Rational sx(s);
  const Rational tx(t);
  const Rational ux(u);
  for (int n = 1; n <= nMax; ++n) {
    // P(S <= k) <= P(T <= k)  <=>  cumS_k * totT <= cumT_k * totS.
    std::vector<Rational> ws(static_cast<std::size_t>(n) + 1);
    std::vector<Rational> wt(static_cast<std::size_t>(n) + 1);
    Rational ps = 1;
    Rational pt = 1;
    for (int j = 0; j <= n; ++j) {
      ws[static_cast<std::size_t>(j)] = ps;
      wt[static_cast<std::size_t>(j)] = (j == 0 || j == n) ? ux * pt : pt;
      ps *= sx;
      pt *= tx;
    }
    Rational tot_s = 0;
    Rational tot_t = 0;
    for (int j = 0; j <= n; ++j) {
      tot_s += ws[static_cast<std::size_t>(j)];
      tot_t += wt[static_cast<std::size_t>(j)];
    }
    DominanceRow row{n, true, -1.0};
    Rational cum_s = 0;
    Rational cum_t = 0;
    for (int k = 0; k < n; ++k) {
      cum_s += ws[static_cast<std::size_t>(k)];
      cum_t += wt[static_cast<std::size_t>(k)];
      if (cum_s * tot_t > cum_t * tot_s) row.dominates = false;
      row.worst_gap = std::max(row.worst_gap, to_double(cum_s / tot_s - cum_t / tot_t));
    }
    report.rows.push_back(row);
  }
  for (int n = nMax; n >= 1 && report.rows[static_cast<std::size_t>(n - 1)].dominates; --n) {
    report.holds_from = n;
  }
  const int start = std::max(1, static_cast<int>(std::ceil(report.n0)));
  report.holds_beyond_n0 = true;
  for (int n = start; n <= nMax; ++n) {
    report.holds_beyond_n0 = report.holds_beyond_n0 && report.rows[static_cast<std::size_t>(n - 1)].dominates;
  }
  return report;
}

}  // namespace kdep
