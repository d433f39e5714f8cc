#include "kdep/building.hpp"

#include <map>
#include <stdexcept>

#include "kdep/perm.hpp"

namespace kdep {

namespace {

using Pattern = std::vector<int>;

Pattern delete_at(const Pattern& x, std::size_t i) {
  Pattern out;
  out.reserve(x.size() - 1);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j != i) out.push_back(x[j]);
  }
  return out;
}

// Relabel by first appearance so the memo keys on the equality pattern.
Pattern canonical(const Pattern& x) {
  std::map<int, int> relabel;
  Pattern out;
  out.reserve(x.size());
  for (int c : x) {
    auto [it, fresh] = relabel.emplace(c, static_cast<int>(relabel.size()) + 1);
    out.push_back(it->second);
  }
  return out;
}

bool proper(const Pattern& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] == x[i - 1]) return false;
  }
  return true;
}

RatPoly building_rec(const Pattern& x) {
  if (!proper(x)) {
    return {};
  }
  if (x.empty()) {
    return RatPoly::constant(1);
  }
  thread_local std::map<Pattern, RatPoly> memo;
  const Pattern key = canonical(x);
  if (auto it = memo.find(key); it != memo.end()) {
    return it->second;
  }
  const std::size_t n = key.size();
  RatPoly sum;
  for (std::size_t i = 0; i < n; ++i) {
    sum += building_rec(delete_at(key, i)).shifted(n - 1 - i);
  }
  memo.emplace(key, sum);
  return sum;
}

RatPoly building_alt_rec(const Pattern& x) {
  if (x.empty()) {
    return RatPoly::constant(1);
  }
  thread_local std::map<Pattern, RatPoly> memo;
  const Pattern key = canonical(x);
  if (auto it = memo.find(key); it != memo.end()) {
    return it->second;
  }
  const std::size_t n = key.size();
  RatPoly sum;
  RatPoly correction;
  for (std::size_t i = 0; i < n; ++i) {
    const RatPoly b = building_alt_rec(delete_at(key, i));
    sum += b.shifted(n - 1 - i);
    if (i >= 1 && key[i - 1] == key[i]) {
      correction += b.shifted(n - 1 - i);
    }
  }
  const RatPoly result = sum - t_int(2) * correction;
  memo.emplace(key, result);
  return result;
}

Word concat(const Word& x, const std::vector<int>& a, const Word& y, int q) {
  std::vector<int> chars = x.chars();
  chars.insert(chars.end(), a.begin(), a.end());
  chars.insert(chars.end(), y.chars().begin(), y.chars().end());
  const int n = static_cast<int>(chars.size());
  return Word(Interval{1, n}, std::move(chars), q);
}

int sign_of(const Rational& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

}  // namespace

RatPoly building_number(const Word& x) { return building_rec(x.chars()); }

RatPoly building_number_alt(const Word& x) { return building_alt_rec(x.chars()); }

RatPoly building_number_brute(const Word& x, int cap) {
  if (x.size() > cap) {
    throw std::invalid_argument("building_number_brute: length " + std::to_string(x.size()) + " exceeds cap " +
                                std::to_string(cap));
  }
  std::vector<Rational> counts(static_cast<std::size_t>(x.size() * (x.size() - 1) / 2 + 1));
  for_each_permutation(
      x.interval(),
      [&](const Perm& s) {
        if (is_proper_building(s, x)) {
          counts[static_cast<std::size_t>(inversions(s))] += 1;
        }
      },
      cap);
  return RatPoly(std::move(counts));
}

RatPoly normalizer(int q, int n) {
  if (q < 3 || n < 0) {
    throw std::invalid_argument("normalizer needs q >= 3 and n >= 0");
  }
  RatPoly z = RatPoly::constant(1);
  for (int j = 1; j <= n; ++j) {
    z *= t_int(j) * Rational(q) - t_int(2) * t_int(j - 1);
  }
  return z;
}

CylinderProb cylinder_prob(const Word& x, const AlgebraicT& root) {
  if (x.alphabet() != root.q) {
    throw std::invalid_argument("cylinder_prob: word alphabet " + std::to_string(x.alphabet()) +
                                " does not match q=" + std::to_string(root.q));
  }
  return CylinderProb{building_number(x), normalizer(root.q, x.size()), root, std::nullopt};
}

CylinderProb cylinder_prob(const Word& x, const Rational& t) {
  return CylinderProb{building_number(x), normalizer(x.alphabet(), x.size()), std::nullopt, t};
}

CylinderValue value_at(const CylinderProb& p) {
  CylinderValue out;
  if (p.t) {
    const Rational den = p.denominator(*p.t);
    if (den == 0) {
      throw std::domain_error("cylinder denominator vanishes at t");
    }
    out.exact = p.numerator(*p.t) / den;
    out.reduced = RatPoly::constant(*out.exact);
    out.approx = *out.exact;
    return out;
  }
  if (!p.at) {
    throw std::invalid_argument("value_at: cylinder probability carries no t");
  }
  const AlgebraicT& root = *p.at;
  const RatPoly d = defining_polynomial(root);
  const RatPoly den = poly_remainder(p.denominator, d);
  if (den.is_zero()) {
    throw std::domain_error("cylinder denominator vanishes at the tuned t");
  }
  const Rational mid = root.midpoint();
  out.approx = p.numerator(mid) / p.denominator(mid);
  if (const auto inv = inverse_mod(den, d)) {
    out.reduced = poly_remainder(p.numerator * *inv, d);
    if (out.reduced.is_constant()) {
      out.exact = out.reduced.coeff(0);
    }
  }
  return out;
}

RatPoly star_sum(const Word& x, const Word& y, int k) {
  const int q = x.alphabet();
  if (y.alphabet() != q) {
    throw std::invalid_argument("star_sum: alphabets differ");
  }
  RatPoly sum;
  if (k == 0) {
    return building_number(concat(x, {}, y, q));
  }
  for_each_word(k, q, [&](const Word& a) { sum += building_number(concat(x, a.chars(), y, q)); });
  return sum;
}

RatPoly k_dependence_defect(const Word& x, const Word& y, int q, int k) {
  if (x.alphabet() != q || y.alphabet() != q) {
    throw std::invalid_argument("k_dependence_defect: word alphabets must equal q");
  }
  const int m = x.size();
  const int n = y.size();
  const RatPoly lhs = power(t_int(k + 1), static_cast<unsigned>(k)) * star_sum(x, y, k);
  const RatPoly rhs = t_factorial(k) * Rational(boost::multiprecision::pow(Integer(q), static_cast<unsigned>(k))) *
                      t_binomial(m + n + 2 * k, m + k) * building_number(x) * building_number(y);
  return lhs - rhs;
}

RatPoly z_closed_form_defect(int q, int k, int n) {
  if (!admissible(q, k)) {
    throw NoSolution(q, k);
  }
  return power(t_int(k + 1), static_cast<unsigned>(n)) * normalizer(q, n) -
         t_factorial(n) * Rational(boost::multiprecision::pow(Integer(q), static_cast<unsigned>(n))) *
             t_binomial(k + n, k);
}

VanishingCertificate certify_vanishing(const RatPoly& e, const AlgebraicT& root, const Rational& tolerance) {
  VanishingCertificate cert;
  if (poly_remainder(e, root.poly).is_zero()) {
    cert.vanishes = true;
    cert.method = VanishingCertificate::Method::remainder;
    return cert;
  }
  cert.method = VanishingCertificate::Method::enclosure;
  AlgebraicT r = root;
  for (int step = 0; step < 2000; ++step) {
    const RationalInterval enclosure = eval_interval(e, r.interval());
    cert.enclosure_width = enclosure.width();
    if (!enclosure.contains(0)) {
      cert.vanishes = false;
      return cert;
    }
    if (enclosure.width() < tolerance) {
      cert.vanishes = true;
      return cert;
    }
    r = refine(r, (r.hi - r.lo) / 2);
  }
  cert.vanishes = false;
  return cert;
}

std::vector<int> converse_scan(int q, const Rational& t, int kMax) {
  if (t <= 0 || t >= 1) {
    throw std::invalid_argument("converse_scan needs 0 < t < 1");
  }
  std::vector<int> out;
  for (int k = 1; k <= kMax; ++k) {
    const RatPoly factor = (t_int(k) * Rational(q)).shifted(static_cast<std::size_t>(k)) -
                           (t_int(2) * t_int(k + 1)).shifted(static_cast<std::size_t>(k - 1));
    if (factor(t) == 0) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<int> converse_scan(int q, const AlgebraicT& t, int kMax) {
  std::vector<int> out;
  for (int k = 1; k <= kMax; ++k) {
    // The factor is t^(k-1) p_{q,k}(t) and t > 0, so only p_{q,k} matters.
    // A common squarefree factor with the defining polynomial of t changes
    // sign on the isolating interval exactly when t is one of its roots.
    RatPoly g = poly_gcd(tuning_poly(q, k), t.poly);
    if (g.degree() < 1) {
      continue;
    }
    g = divide(g, poly_gcd(g, g.derivative())).quotient;
    AlgebraicT r = t;
    for (int step = 0; step < 400; ++step) {
      if (sign_of(g(r.lo)) * sign_of(g(r.hi)) < 0) {
        out.push_back(k);
        break;
      }
      if (!eval_interval(g, r.interval()).contains(0)) {
        break;
      }
      r = refine(r, (r.hi - r.lo) / 2);
    }
  }
  return out;
}

}  // namespace kdep
