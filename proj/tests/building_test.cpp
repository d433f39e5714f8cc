#include "kdep/building.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "kdep/perm.hpp"

namespace {

using kdep::RatPoly;
using kdep::Rational;
using kdep::Word;

RatPoly poly(std::initializer_list<long> coeffs) {
  std::vector<Rational> c;
  for (long v : coeffs) c.emplace_back(v);
  return RatPoly(std::move(c));
}

Word w(const std::string& s, int q = 5) { return Word::parse(s, q); }

Word empty_word(int q) { return Word(kdep::Interval{1, 0}, {}, q); }

Word append(const Word& x, int c) {
  auto chars = x.chars();
  chars.push_back(c);
  return Word(kdep::Interval{1, x.size() + 1}, chars, x.alphabet());
}

Word prepend(const Word& x, int c) {
  std::vector<int> chars{c};
  chars.insert(chars.end(), x.chars().begin(), x.chars().end());
  return Word(kdep::Interval{1, x.size() + 1}, chars, x.alphabet());
}

kdep::AlgebraicT golden() { return kdep::solve_tuning(5, 1, kdep::parse_rational("1e-40")); }

TEST(BuildingNumber, Examples) {
  EXPECT_TRUE(kdep::building_number(w("11")).is_zero());
  EXPECT_EQ(kdep::building_number(w("12")), poly({1, 1}));
  EXPECT_EQ(kdep::building_number(w("121")), poly({1, 1, 1, 1}));
  EXPECT_EQ(kdep::building_number(empty_word(5)), poly({1}));
  EXPECT_EQ(kdep::building_number_brute(w("12")), poly({1, 1}));
  EXPECT_EQ(kdep::building_number_brute(w("123")), kdep::t_factorial(3));
  EXPECT_EQ(kdep::building_number_brute(w("1212")), kdep::building_number(w("1212")));
  EXPECT_THROW(kdep::building_number_brute(w("12121212")), std::invalid_argument);
}

TEST(BuildingNumber, RecurrencesAgreeWithEnumerationOnPatterns) {
  int checks = 0;
  for (int q : {3, 4, 5}) {
    for (int n = 0; n <= 6; ++n) {
      std::set<std::vector<int>> seen;
      kdep::for_each_word(n, q, [&](const Word& x) {
        if (!seen.insert(x.pattern()).second) return;
        const RatPoly b = kdep::building_number(x);
        ASSERT_EQ(b, kdep::building_number_brute(x)) << x.to_string();
        ASSERT_EQ(b, kdep::building_number_alt(x)) << x.to_string();
        ASSERT_EQ(b.is_zero(), !x.is_proper());
        ++checks;
      });
    }
  }
  EXPECT_GT(checks, 300);
}

TEST(BuildingNumber, SecondRecurrenceOnAllWords) {
  for (int n = 0; n <= 6; ++n) {
    kdep::for_each_word(n, 4, [&](const Word& x) {
      ASSERT_EQ(kdep::building_number(x), kdep::building_number_alt(x)) << x.to_string();
    });
  }
}

TEST(BuildingNumber, Consistency) {
  for (int q : {3, 4, 5}) {
    for (int n = 0; n <= 5; ++n) {
      const RatPoly factor = kdep::t_int(n + 1) * Rational(q) - kdep::t_int(2) * kdep::t_int(n);
      kdep::for_each_word(n, q, [&](const Word& x) {
        RatPoly right;
        RatPoly left;
        for (int a = 1; a <= q; ++a) {
          right += kdep::building_number(append(x, a));
          left += kdep::building_number(prepend(x, a));
        }
        const RatPoly expected = factor * kdep::building_number(x);
        ASSERT_EQ(right, expected) << x.to_string();
        ASSERT_EQ(left, expected) << x.to_string();
      });
    }
  }
}

TEST(BuildingNumber, Reversible) {
  for (int q : {3, 4}) {
    for (int n = 0; n <= 6; ++n) {
      kdep::for_each_word(n, q, [&](const Word& x) {
        ASSERT_EQ(kdep::building_number(x), kdep::building_number(x.reversed())) << x.to_string();
      });
    }
  }
}

TEST(Normalizer, Examples) {
  EXPECT_EQ(kdep::normalizer(5, 0), poly({1}));
  for (int q = 3; q <= 7; ++q) EXPECT_EQ(kdep::normalizer(q, 1), poly({q}));
  EXPECT_EQ(kdep::normalizer(5, 2), poly({20, 20}));
}

TEST(Normalizer, SumsBuildingNumbers) {
  for (int q : {3, 4, 5}) {
    for (int n = 0; n <= 5; ++n) {
      RatPoly sum;
      kdep::for_each_word(n, q, [&](const Word& x) { sum += kdep::building_number(x); });
      EXPECT_EQ(sum, kdep::normalizer(q, n)) << q << "," << n;
    }
  }
}

TEST(CylinderProb, ExactValuesAtGoldenRoot) {
  const auto root = golden();
  EXPECT_EQ(kdep::value_at(kdep::cylinder_prob(w("34"), root)).exact, Rational(1, 20));
  EXPECT_EQ(kdep::value_at(kdep::cylinder_prob(w("121"), root)).exact, Rational(1, 100));
  EXPECT_EQ(kdep::value_at(kdep::cylinder_prob(w("123"), root)).exact, Rational(1, 75));
  EXPECT_EQ(kdep::value_at(kdep::cylinder_prob(w("11"), root)).exact, Rational(0));
  // Hand-reduced form (1+t^2) / (20 (4 + 3t + 4t^2)) at the golden root.
  const double t = (3.0 - std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR((1 + t * t) / (20 * (4 + 3 * t + 4 * t * t)), 0.01, 1e-15);
  EXPECT_NEAR(kdep::to_double(kdep::value_at(kdep::cylinder_prob(w("121"), root)).approx), 0.01, 1e-15);
}

TEST(CylinderProb, SameRootForFourTwo) {
  const auto root = kdep::solve_tuning(4, 2, kdep::parse_rational("1e-40"));
  EXPECT_EQ(kdep::value_at(kdep::cylinder_prob(w("12", 4), root)).exact, Rational(1, 12));
  EXPECT_THROW(kdep::cylinder_prob(w("12", 5), root), std::invalid_argument);
}

TEST(CylinderProb, RationalTAndMassSum) {
  const Rational t(1, 3);
  Rational total = 0;
  kdep::for_each_word(3, 4, [&](const Word& x) { total += *kdep::value_at(kdep::cylinder_prob(x, t)).exact; });
  EXPECT_EQ(total, 1);
}

TEST(KDependence, Examples) {
  EXPECT_TRUE(kdep::k_dependence_defect(empty_word(5), empty_word(5), 5, 1).is_zero());
  const RatPoly e = kdep::k_dependence_defect(w("1"), w("2"), 5, 1);
  EXPECT_EQ(e, poly({2, 2, 2}) * poly({-1, 3, -1}));
  EXPECT_EQ(kdep::star_sum(w("1"), w("2"), 1), kdep::t_factorial(3) * Rational(3));
  const auto p = kdep::tuning_poly(5, 1);
  EXPECT_TRUE(kdep::poly_remainder(e, p).is_zero());
  EXPECT_TRUE(kdep::poly_remainder(kdep::k_dependence_defect(w("1"), w("1"), 5, 1), p).is_zero());
}

TEST(KDependence, SmallPairsVanish) {
  for (auto [q, k] : {std::pair{5, 1}, std::pair{4, 2}, std::pair{3, 3}}) {
    const auto root = kdep::solve_tuning(q, k, kdep::parse_rational("1e-12"));
    for (int m = 0; m <= 2; ++m) {
      for (int n = 0; m + n <= 2; ++n) {
        kdep::for_each_word(m, q, [&](const Word& x) {
          kdep::for_each_word(n, q, [&](const Word& y) {
            const auto cert = kdep::certify_vanishing(kdep::k_dependence_defect(x, y, q, k), root);
            ASSERT_TRUE(cert.vanishes) << q << "," << k << " " << x.to_string() << "|" << y.to_string();
          });
        });
      }
    }
  }
}

TEST(KDependence, DefectDoesNotVanishOffTune) {
  // (q,k) = (5,1) words checked at the (3,3) root: the certificate must refuse.
  const auto other = kdep::solve_tuning(3, 3, kdep::parse_rational("1e-12"));
  const auto e = kdep::k_dependence_defect(w("1"), w("2"), 5, 1);
  EXPECT_FALSE(kdep::certify_vanishing(e, other).vanishes);
}

TEST(ZClosedForm, Examples) {
  EXPECT_TRUE(kdep::z_closed_form_defect(5, 1, 0).is_zero());
  const RatPoly d = kdep::z_closed_form_defect(5, 1, 2);
  EXPECT_EQ(d, -(poly({1, 1}) * poly({5, -15, 5})));
  EXPECT_TRUE(kdep::poly_remainder(d, poly({1, -3, 1})).is_zero());
  EXPECT_TRUE(kdep::poly_remainder(kdep::z_closed_form_defect(3, 3, 3), kdep::tuning_poly(3, 3)).is_zero());
  EXPECT_THROW(kdep::z_closed_form_defect(4, 1, 2), kdep::NoSolution);
  for (auto [q, k] : {std::pair{5, 1}, std::pair{4, 2}, std::pair{3, 3}, std::pair{7, 2}}) {
    const auto root = kdep::solve_tuning(q, k, kdep::parse_rational("1e-12"));
    for (int n = 0; n <= 8; ++n) EXPECT_TRUE(kdep::certify_vanishing(kdep::z_closed_form_defect(q, k, n), root).vanishes);
  }
}

TEST(ConverseScan, Examples) {
  EXPECT_EQ(kdep::converse_scan(5, golden(), 6), std::vector<int>{1});
  EXPECT_TRUE(kdep::converse_scan(5, Rational(1, 2), 6).empty());
  EXPECT_THROW(kdep::converse_scan(5, Rational(1), 6), std::invalid_argument);
  const auto root42 = kdep::solve_tuning(4, 2, Rational(1, 1000));
  EXPECT_EQ(kdep::converse_scan(4, root42, 6), std::vector<int>{2});
  EXPECT_EQ(kdep::converse_scan(5, root42, 6), std::vector<int>{1});
}

TEST(ConverseScan, AtMostOneK) {
  for (int q = 3; q <= 9; ++q) {
    for (int k = 1; k <= 5; ++k) {
      if (!kdep::admissible(q, k)) continue;
      const auto root = kdep::solve_tuning(q, k, Rational(1, 1 << 16));
      EXPECT_EQ(kdep::converse_scan(q, root, 8), std::vector<int>{k}) << q << "," << k;
    }
  }
}

}  // namespace
