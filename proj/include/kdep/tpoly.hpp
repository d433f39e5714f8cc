#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdep/rational.hpp"

namespace kdep {

/// Polynomial in the formal variable t with exact rational coefficients.
///
/// Always canonical: no trailing zero coefficient, so the zero polynomial has
/// an empty coefficient vector and equality is coefficient-wise.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coeffs);

  static RatPoly constant(const Rational& c);
  static RatPoly monomial(const Rational& c, std::size_t degree);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t power) const;
  const Rational& leading() const;

  /// Multiplies by t^power.
  RatPoly shifted(std::size_t power) const;
  RatPoly derivative() const;

  Rational operator()(const Rational& x) const;
  double eval(double x) const;

  RatPoly& operator+=(const RatPoly& other);
  RatPoly& operator-=(const RatPoly& other);
  RatPoly& operator*=(const RatPoly& other);
  RatPoly& operator*=(const Rational& scalar);

  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(RatPoly a, const Rational& s) { return a *= s; }
  friend RatPoly operator*(const Rational& s, RatPoly a) { return a *= s; }
  friend RatPoly operator-(RatPoly a);
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Human-readable form such as "1 + 2t - t^3".
  std::string to_string() const;

 private:
  void canonicalize();
  std::vector<Rational> coeffs_;
};

struct PolyDivision {
  RatPoly quotient;
  RatPoly remainder;
};

/// Euclidean division over the rationals. Throws std::invalid_argument when
/// the divisor is zero.
PolyDivision divide(const RatPoly& dividend, const RatPoly& divisor);
RatPoly poly_remainder(const RatPoly& a, const RatPoly& p);
/// Monic greatest common divisor; gcd(0, 0) = 0.
RatPoly poly_gcd(RatPoly a, RatPoly b);
/// b with a*b = 1 mod p, or nullopt when a and p share a factor.
std::optional<RatPoly> inverse_mod(const RatPoly& a, const RatPoly& p);
RatPoly power(const RatPoly& base, unsigned exponent);
Rational eval_rational(const RatPoly& a, const Rational& x);

/// Closed rational interval [lo, hi].
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// Enclosure of { a(x) : lo <= x <= hi } by exact interval Horner evaluation.
RationalInterval eval_interval(const RatPoly& a, const RationalInterval& x);

/// [n]_t = 1 + t + ... + t^(n-1); zero for n = 0.
RatPoly t_int(int n);
/// [n]!_t = [1]_t [2]_t ... [n]_t.
RatPoly t_factorial(int n);
/// Gaussian binomial coefficient; rejects k outside [0, n].
RatPoly t_binomial(int n, int k);

/// q t [k]_t - [2]_t [k+1]_t. Its root in (0,1) is the Mallows parameter that
/// makes the q-coloring k-dependent.
RatPoly tuning_poly(int q, int k);

/// True when the tuning polynomial has a root in (0,1), i.e. qk > 2(k+1).
bool admissible(int q, int k);

class NoSolution : public std::domain_error {
 public:
  NoSolution(int q, int k);
  int q() const { return q_; }
  int k() const { return k_; }

 private:
  int q_;
  int k_;
};

/// The tuned parameter t(q,k) as an isolating interval of the tuning
/// polynomial: poly(lo) < 0 < poly(hi), 0 < lo < hi < 1, hi - lo <= precision.
struct AlgebraicT {
  int q = 0;
  int k = 0;
  RatPoly poly;
  Rational lo;
  Rational hi;
  Rational precision;

  Rational midpoint() const { return (lo + hi) / 2; }
  double value() const { return to_double(midpoint()); }
  RationalInterval interval() const { return {lo, hi}; }
};

/// Isolates the unique root of tuning_poly(q,k) in (0,1) by exact bisection.
/// Throws NoSolution when qk <= 2(k+1), std::invalid_argument when
/// precision <= 0.
AlgebraicT solve_tuning(int q, int k, const Rational& precision);

/// Continues the bisection of an existing isolating interval.
AlgebraicT refine(const AlgebraicT& root, const Rational& precision);

/// The tuning polynomial with every rational-root factor whose root lies
/// outside the isolating interval divided out. For the admissible (q,k) used
/// here this is the minimal polynomial of t(q,k), up to a scalar.
RatPoly defining_polynomial(const AlgebraicT& root);

}  // namespace kdep
