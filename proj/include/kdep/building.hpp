#pragma once

#include <optional>
#include <vector>

#include "kdep/tpoly.hpp"
#include "kdep/word.hpp"

namespace kdep {

inline constexpr int kBuildingEnumerationCap = 7;

/// B_t(x): sum of t^inv(sigma) over proper buildings sigma of x. Uses the
/// deletion recurrence on the last-arriving position, memoized per thread on
/// the color pattern of x.
RatPoly building_number(const Word& x);
/// Same polynomial from the recurrence with the [2]_t correction for equal
/// neighbours. Independent memo; used to cross-check building_number.
RatPoly building_number_alt(const Word& x);
/// Direct enumeration over all permutations; throws above the cap.
RatPoly building_number_brute(const Word& x, int cap = kBuildingEnumerationCap);

/// Z(t,q,n) = prod_{j=1..n} (q[j]_t - [2]_t[j-1]_t), the sum of B_t over all
/// q^n words of length n.
RatPoly normalizer(int q, int n);

/// P^col(x) = B_t(x) / Z(t,q,|x|) at a tuned or rational t.
struct CylinderProb {
  RatPoly numerator;
  RatPoly denominator;
  std::optional<AlgebraicT> at;
  std::optional<Rational> t;
};

CylinderProb cylinder_prob(const Word& x, const AlgebraicT& root);
CylinderProb cylinder_prob(const Word& x, const Rational& t);

struct CylinderValue {
  /// Present when the value is rational: always for a rational t, and for a
  /// tuned t when numerator/denominator reduces to a constant modulo the
  /// defining polynomial.
  std::optional<Rational> exact;
  /// numerator/denominator reduced modulo the defining polynomial (constant
  /// polynomial for a rational t).
  RatPoly reduced;
  /// Evaluation at the isolating interval's midpoint.
  Rational approx;
};

/// Throws std::domain_error when the denominator vanishes at t.
CylinderValue value_at(const CylinderProb& p);

/// Sum of B_t(x a y) over all q^k middle words a.
RatPoly star_sum(const Word& x, const Word& y, int k);

/// [k+1]_t^k B_t(x *^k y) - [k]!_t q^k binom(m+n+2k, m+k)_t B_t(x) B_t(y).
/// Vanishes at t(q,k).
RatPoly k_dependence_defect(const Word& x, const Word& y, int q, int k);

/// [k+1]_t^n Z(t,q,n) - [n]!_t q^n binom(k+n, k)_t. Throws NoSolution unless
/// qk > 2(k+1).
RatPoly z_closed_form_defect(int q, int k, int n);

struct VanishingCertificate {
  enum class Method { remainder, enclosure };
  bool vanishes = false;
  Method method = Method::remainder;
  /// Width of the final enclosure (zero for the remainder route).
  Rational enclosure_width;
};

/// Certifies E(t(q,k)) = 0: first by a zero remainder modulo the full tuning
/// polynomial, otherwise by exact interval evaluation on refinements of the
/// isolating interval until the enclosure straddles zero with width below
/// `tolerance` (or excludes zero).
VanishingCertificate certify_vanishing(const RatPoly& e, const AlgebraicT& root,
                                       const Rational& tolerance = parse_rational("1e-30"));

/// The k' in [1, kMax] with q t^k'[k']_t - t^(k'-1)[2]_t[k'+1]_t = 0 at t.
std::vector<int> converse_scan(int q, const Rational& t, int kMax);
std::vector<int> converse_scan(int q, const AlgebraicT& t, int kMax);

}  // namespace kdep
