#include "kdep/tpoly.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace kdep {

RatPoly::RatPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { canonicalize(); }

RatPoly RatPoly::constant(const Rational& c) { return RatPoly(std::vector<Rational>{c}); }

RatPoly RatPoly::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> coeffs(degree + 1);
  coeffs[degree] = c;
  return RatPoly(std::move(coeffs));
}

void RatPoly::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) {
    coeffs_.pop_back();
  }
}

Rational RatPoly::coeff(std::size_t power) const {
  return power < coeffs_.size() ? coeffs_[power] : Rational(0);
}

const Rational& RatPoly::leading() const {
  if (coeffs_.empty()) {
    throw std::logic_error("zero polynomial has no leading coefficient");
  }
  return coeffs_.back();
}

RatPoly RatPoly::shifted(std::size_t power) const {
  if (is_zero()) {
    return {};
  }
  std::vector<Rational> coeffs(power, Rational(0));
  coeffs.insert(coeffs.end(), coeffs_.begin(), coeffs_.end());
  return RatPoly(std::move(coeffs));
}

RatPoly RatPoly::derivative() const {
  std::vector<Rational> coeffs;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    coeffs.push_back(coeffs_[i] * static_cast<long>(i));
  }
  return RatPoly(std::move(coeffs));
}

Rational RatPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

double RatPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + to_double(*it);
  }
  return acc;
}

RatPoly& RatPoly::operator+=(const RatPoly& other) {
  if (coeffs_.size() < other.coeffs_.size()) {
    coeffs_.resize(other.coeffs_.size());
  }
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
    coeffs_[i] += other.coeffs_[i];
  }
  canonicalize();
  return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& other) {
  if (coeffs_.size() < other.coeffs_.size()) {
    coeffs_.resize(other.coeffs_.size());
  }
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
    coeffs_[i] -= other.coeffs_[i];
  }
  canonicalize();
  return *this;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) {
    return {};
  }
  std::vector<Rational> coeffs(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) {
      continue;
    }
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      coeffs[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return RatPoly(std::move(coeffs));
}

RatPoly& RatPoly::operator*=(const RatPoly& other) { return *this = *this * other; }

RatPoly& RatPoly::operator*=(const Rational& scalar) {
  for (auto& c : coeffs_) {
    c *= scalar;
  }
  canonicalize();
  return *this;
}

RatPoly operator-(RatPoly a) {
  for (auto& c : a.coeffs_) {
    c = -c;
  }
  return a;
}

std::string RatPoly::to_string() const {
  if (is_zero()) {
    return "0";
  }
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) {
      continue;
    }
    const bool negative = c < 0;
    const Rational magnitude = negative ? Rational(-c) : c;
    if (first) {
      out << (negative ? "-" : "");
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const bool unit = magnitude == 1;
    if (i == 0 || !unit) {
      out << to_fraction_string(magnitude);
    }
    if (i >= 1) {
      out << "t";
    }
    if (i >= 2) {
      out << "^" << i;
    }
  }
  return out.str();
}

PolyDivision divide(const RatPoly& dividend, const RatPoly& divisor) {
  if (divisor.is_zero()) {
    throw std::invalid_argument("polynomial division by zero");
  }
  std::vector<Rational> rem = dividend.coeffs();
  const int dd = divisor.degree();
  if (dividend.degree() < dd) {
    return {RatPoly{}, dividend};
  }
  std::vector<Rational> quot(rem.size() - static_cast<std::size_t>(dd));
  const Rational& lead = divisor.leading();
  for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
    if (rem[static_cast<std::size_t>(i)] == 0) {
      continue;
    }
    const Rational factor = rem[static_cast<std::size_t>(i)] / lead;
    quot[static_cast<std::size_t>(i - dd)] = factor;
    for (int j = 0; j <= dd; ++j) {
      rem[static_cast<std::size_t>(i - dd + j)] -= factor * divisor.coeffs()[static_cast<std::size_t>(j)];
    }
  }
  rem.resize(static_cast<std::size_t>(dd));
  return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
}

RatPoly poly_remainder(const RatPoly& a, const RatPoly& p) { return divide(a, p).remainder; }

RatPoly poly_gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly r = poly_remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) {
    return a;
  }
  return a * Rational(1 / a.leading());
}

std::optional<RatPoly> inverse_mod(const RatPoly& a, const RatPoly& p) {
  // Extended Euclid tracking only the coefficient of a.
  RatPoly r0 = p;
  RatPoly r1 = poly_remainder(a, p);
  RatPoly s0;
  RatPoly s1 = RatPoly::constant(1);
  while (!r1.is_zero()) {
    PolyDivision qr = divide(r0, r1);
    RatPoly s2 = s0 - qr.quotient * s1;
    r0 = std::move(r1);
    r1 = std::move(qr.remainder);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.degree() != 0) {
    return std::nullopt;
  }
  return poly_remainder(s0 * Rational(1 / r0.leading()), p);
}

RatPoly power(const RatPoly& base, unsigned exponent) {
  RatPoly result = RatPoly::constant(1);
  RatPoly square = base;
  while (exponent != 0) {
    if (exponent & 1U) {
      result *= square;
    }
    exponent >>= 1U;
    if (exponent != 0) {
      square *= square;
    }
  }
  return result;
}

Rational eval_rational(const RatPoly& a, const Rational& x) { return a(x); }

namespace {

RationalInterval mul(const RationalInterval& a, const RationalInterval& b) {
  const Rational p1 = a.lo * b.lo;
  const Rational p2 = a.lo * b.hi;
  const Rational p3 = a.hi * b.lo;
  const Rational p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

}  // namespace

RationalInterval eval_interval(const RatPoly& a, const RationalInterval& x) {
  RationalInterval acc{Rational(0), Rational(0)};
  const auto& c = a.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = mul(acc, x);
    acc.lo += *it;
    acc.hi += *it;
  }
  return acc;
}

RatPoly t_int(int n) {
  if (n < 0) {
    throw std::invalid_argument("t_int: negative argument");
  }
  return RatPoly(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)));
}

RatPoly t_factorial(int n) {
  if (n < 0) {
    throw std::invalid_argument("t_factorial: negative argument");
  }
  RatPoly result = RatPoly::constant(1);
  for (int i = 2; i <= n; ++i) {
    result *= t_int(i);
  }
  return result;
}

RatPoly t_binomial(int n, int k) {
  if (k < 0 || k > n) {
    throw std::invalid_argument("t_binomial: need 0 <= k <= n");
  }
  // Product of [n-i]/[i+1]; every intermediate quotient is exact.
  RatPoly result = RatPoly::constant(1);
  for (int i = 0; i < k; ++i) {
    result = divide(result * t_int(n - i), t_int(i + 1)).quotient;
  }
  return result;
}

RatPoly tuning_poly(int q, int k) {
  if (q < 1 || k < 1) {
    throw std::invalid_argument("tuning_poly: need q >= 1 and k >= 1");
  }
  return t_int(k).shifted(1) * Rational(q) - t_int(2) * t_int(k + 1);
}

bool admissible(int q, int k) { return k >= 1 && q * k > 2 * (k + 1); }

NoSolution::NoSolution(int q, int k)
    : std::domain_error("no tuned parameter for q=" + std::to_string(q) + ", k=" + std::to_string(k) +
                        ": requires qk>2(k+1)"),
      q_(q),
      k_(k) {}

namespace {

int sign(const Rational& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

void bisect(AlgebraicT& root, const Rational& precision) {
  while (root.hi - root.lo > precision || root.lo <= 0 || root.hi >= 1) {
    const Rational mid = root.midpoint();
    const int s = sign(root.poly(mid));
    if (s == 0) {
      throw std::logic_error("tuning polynomial has a rational root at " + to_fraction_string(mid));
    }
    if (s < 0) {
      root.lo = mid;
    } else {
      root.hi = mid;
    }
  }
  root.precision = precision;
}

std::vector<Integer> positive_divisors(Integer n) {
  if (n < 0) {
    n = -n;
  }
  std::vector<Integer> divisors;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      divisors.push_back(d);
      if (d * d != n) {
        divisors.push_back(n / d);
      }
    }
  }
  return divisors;
}

}  // namespace

AlgebraicT solve_tuning(int q, int k, const Rational& precision) {
  if (!admissible(q, k)) {
    throw NoSolution(q, k);
  }
  if (precision <= 0) {
    throw std::invalid_argument("solve_tuning: precision must be positive");
  }
  AlgebraicT root;
  root.q = q;
  root.k = k;
  root.poly = tuning_poly(q, k);
  root.lo = 0;
  root.hi = 1;
  bisect(root, precision);
  return root;
}

AlgebraicT refine(const AlgebraicT& root, const Rational& precision) {
  if (precision <= 0) {
    throw std::invalid_argument("refine: precision must be positive");
  }
  AlgebraicT out = root;
  bisect(out, precision);
  return out;
}

RatPoly defining_polynomial(const AlgebraicT& root) {
  RatPoly p = root.poly;
  // Clear denominators so the rational root theorem applies.
  Integer lcm = 1;
  for (const auto& c : p.coeffs()) {
    lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(c));
  }
  p *= Rational(lcm);

  bool stripped = true;
  while (stripped && p.degree() > 1) {
    stripped = false;
    if (p.coeff(0) == 0) {
      p = divide(p, RatPoly::monomial(1, 1)).quotient;
      stripped = true;
      continue;
    }
    const Integer c0 = boost::multiprecision::numerator(p.coeff(0));
    const Integer lead = boost::multiprecision::numerator(p.leading());
    // Divisor enumeration is only cheap for small coefficients; larger ones
    // never occur for tuning polynomials of moderate (q,k).
    if (boost::multiprecision::abs(c0) > 1000000 || boost::multiprecision::abs(lead) > 1000000) {
      break;
    }
    for (const Integer& a : positive_divisors(c0)) {
      for (const Integer& b : positive_divisors(lead)) {
        for (int s : {1, -1}) {
          const Rational candidate(Integer(a * s), b);
          if (root.interval().contains(candidate) || p(candidate) != 0) {
            continue;
          }
          p = divide(p, RatPoly(std::vector<Rational>{-candidate, Rational(1)})).quotient;
          stripped = true;
          break;
        }
        if (stripped) break;
      }
      if (stripped) break;
    }
  }
  return p;
}

}  // namespace kdep
