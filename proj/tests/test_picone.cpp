#include <cmath>

#include <gtest/gtest.h>

#include "common.hpp"

using namespace strata;
using testing_util::poly;

namespace {

const ExponentVector p22 = ExponentVector::uniform(2, 2.0);

}  // namespace

TEST(Picone, VanishesForProportionalPairs) {
  auto g = make_heisenberg(1);
  auto v = random_oscillating_field(3, 4);
  auto p = ExponentVector({1.5, 3.0});
  for (const auto& x : halton_points(cube(3, -1, 1), 200, 2)) {
    EXPECT_NEAR(picone_L(g, p, {v, v}, x), 0.0, 1e-12);
    EXPECT_NEAR(picone_R(g, p, {fields::zero(3), v}, x), 0.0, 1e-12);
    EXPECT_NEAR(picone_L(g, p, {fields::zero(3), v}, x), 0.0, 1e-12);
  }
}

TEST(Picone, PolynomialPairByHand) {
  // u = x1, v = 1 + x2^2 at (1, 1): for p = 2 each term is (X u - (u/v) X v)^2
  auto g = make_euclidean(2);
  PiconePair pair{poly("x1"), poly("1 + x2^2")};
  Point x{1, 1};
  EXPECT_NEAR(picone_L(g, p22, pair, x), 2.0, 1e-14);
  EXPECT_NEAR(picone_R(g, p22, pair, x), 2.0, 1e-14);
  // p = 3: |a|^3 - 3 r^2 |b| b a + 2 r^3 |b|^3 with r = 1/2 gives 1 + 2
  auto p3 = ExponentVector::uniform(2, 3.0);
  EXPECT_NEAR(picone_L(g, p3, pair, x), 3.0, 1e-14);
  EXPECT_NEAR(picone_R(g, p3, pair, x), 3.0, 1e-14);
}

TEST(Picone, ScaledPairHasZeroL) {
  auto g = make_heisenberg(1);
  auto v = random_oscillating_field(3, 8);
  auto u = fields::product(fields::constant(3.0), v);
  for (const auto& x : halton_points(cube(3, -1, 1), 100, 5))
    EXPECT_NEAR(picone_L(g, ExponentVector({2.0, 3.0}), {u, v}, x), 0.0, 1e-10);
}

TEST(Picone, RandomPairsOnHeisenberg) {
  auto g = make_heisenberg(1);
  auto pts = halton_points(cube(3, -1, 1), 1000, 6);
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto rep = check_picone(g, random_exponents(2, s), random_picone_pair(g, s), pts, {1e-8, 1e-10});
    EXPECT_TRUE(rep.passed()) << s << " residual " << rep.max_abs_residual;
  }
}

TEST(Picone, SecondOrderConcaveExample) {
  auto g = make_euclidean(3);
  PiconePair pair{fields::bump({0.1, 0, 0}, 0.9), poly("2 - 0.125*x1^2 - 0.125*x2^2 - 0.125*x3^2")};
  auto pts = halton_points(cube(3, -0.7, 0.7), 1000, 3);
  auto rep = check_picone(g, ExponentVector({2.0, 3.0, 2.5}), pair, pts, {1e-6, 1e-8}, PiconeOrder::second);
  EXPECT_TRUE(rep.passed()) << rep.max_abs_residual;
  EXPECT_EQ(rep.check, "picone_second_order");
}

TEST(Picone, Guards) {
  auto g = make_euclidean(2);
  // X^2 v must be negative for the second-order identity
  EXPECT_THROW(picone_L1(g, p22, {poly("1"), poly("2 + x1^2")}, Point{0.1, 0.1}), Error);
  try {
    picone_L1(g, p22, {poly("1"), poly("2 + x1^2")}, Point{0.1, 0.1});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::sign_violation);
  }
  try {
    picone_L(g, p22, {poly("1"), poly("x1")}, Point{-0.5, 0.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_violation);
  }
  try {
    picone_L(g, p22, {poly("x1"), poly("1")}, Point{-0.5, 0.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_violation);
  }
  EXPECT_THROW(picone_L(g, ExponentVector::uniform(3, 2.0), {poly("1"), poly("1")}, Point{0, 0}), Error);
  EXPECT_THROW(ExponentVector({2.0, 1.0}), Error);
  EXPECT_THROW(ExponentVector({2.0, 0.5}), Error);
}

TEST(Picone, GuardExcludesFlatPointsAndReportsEmptySample) {
  auto g = make_euclidean(2);
  PiconePair pair{poly("1 + x2^2"), poly("2 + x1^2")};
  auto p = ExponentVector({1.5, 2.0});
  std::vector<Point> pts{{0.0, 0.3}, {0.5, 0.3}, {0.0, -0.2}};
  auto rep = check_picone(g, p, pair, pts, {});
  EXPECT_EQ(rep.excluded_count, 2u);
  EXPECT_TRUE(rep.passed());
  std::vector<Point> flat{{0.0, 0.3}, {0.0, -0.7}};
  try {
    check_picone(g, p, pair, flat, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::empty_sample);
  }
}

TEST(Picone, TermsScaleWithPowerOfAmplitude) {
  auto g = make_heisenberg(1);
  auto p = ExponentVector({1.5, 3.0});
  auto pair = random_picone_pair(g, 13);
  for (double lam : {0.5, 2.0, 7.0}) {
    PiconePair scaled{fields::product(fields::constant(lam), pair.u), pair.v};
    for (const auto& x : halton_points(cube(3, -1, 1), 50, 7)) {
      auto a = picone_L_terms(g, p, pair, x), b = picone_L_terms(g, p, scaled, x);
      for (std::size_t i = 0; i < 2; ++i) {
        const double expect = std::pow(lam, p[i]) * a[i];
        EXPECT_NEAR(b[i], expect, 1e-9 * std::max(1.0, std::fabs(expect)));
      }
    }
  }
}

TEST(Picone, HeisenbergTwoLargeSample) {
  auto g = make_heisenberg(2);
  auto pts = halton_points(cube(5, -1, 1), 10000, 1);
  auto rep = check_picone(g, ExponentVector({1.5, 2, 3, 2.5}), random_picone_pair(g, 99), pts, {1e-8, 1e-10});
  EXPECT_TRUE(rep.passed()) << rep.max_abs_residual;
  EXPECT_LE(rep.max_abs_residual, 1e-8);
  EXPECT_GE(*rep.min_value, -1e-10);
}
