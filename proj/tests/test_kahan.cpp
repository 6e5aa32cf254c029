#include <gtest/gtest.h>

#include "kd/errors.hpp"
#include "support.hpp"

using namespace kd;
using kdtest::canon;

TEST(Kahan, DenominatorIsProductOfReferenceFactors) {
  const auto& e = kdtest::Eq2::get();
  EXPECT_TRUE(kdtest::same_up_to_unit(e.map.common_den, canon(kdtest::kRefD1) * canon(kdtest::kRefD2)));
  EXPECT_EQ(e.map.common_den.constant_term(), 1);
}

TEST(Kahan, JacobianMatchesReferenceFactorization) {
  const auto& e = kdtest::Eq2::get();
  auto num = canon(kdtest::kRefK1) * canon(kdtest::kRefK2) * canon(kdtest::kRefK3) *
             canon(kdtest::kRefK4);
  auto den = canon(kdtest::kRefD1) * canon(kdtest::kRefD2).pow(4);
  RationalFunction expected(num, den);
  // Equal up to a rational unit.
  auto ratio = e.J.J / expected;
  EXPECT_TRUE(ratio.num().is_constant());
  EXPECT_TRUE(ratio.den().is_constant());
}

TEST(Kahan, ZeroOdeGivesIdentity) {
  auto map = build_kahan_map(parse_ode("x' = 0; y' = 0"));
  EXPECT_TRUE(map.common_den.is_one());
  EXPECT_EQ(map.numerators[0], canon("x1", 2));
  EXPECT_EQ(map.numerators[1], canon("x2", 2));
  EXPECT_EQ(jacobian_determinant(map).J, RationalFunction(canon("1", 2)));
}

TEST(Kahan, OneDimensionalSquare) {
  auto map = build_kahan_map(parse_ode("x' = x^2"));
  // x~ = x + h x^2 / (1 - h x) = x / (1 - h x)
  EXPECT_EQ(map.component(0), RationalFunction(canon("x1", 1), canon("1 - h*x1", 1)));
  auto J = jacobian_determinant(map).J;
  EXPECT_EQ(J, RationalFunction(canon("1", 1), canon("(1 - h*x1)^2", 1)));
  EXPECT_EQ(J, map.component(0).derivative(0));
}

TEST(Kahan, MapAtExactPoint) {
  const auto& e = kdtest::Eq2::get();
  std::vector<Rational> p{1, 1, 1, Rational(1, 10)};
  auto img = e.map.apply(p);
  ASSERT_TRUE(img);
  EXPECT_EQ((*img)[0], Rational(9563, 8841));
  EXPECT_EQ((*img)[1], Rational(415, 421));
  EXPECT_EQ((*img)[2], Rational(301, 421));
}

TEST(Kahan, TimeSymmetry) {
  const auto& e = kdtest::Eq2::get();
  std::vector<std::vector<Rational>> pts{{1, 1, 1}, {Rational(1, 3), Rational(-2, 5), Rational(3, 7)}};
  auto r = check_time_symmetry(e.map, pts, Rational(1, 10));
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.skipped.empty());
}

TEST(Kahan, IdentityIsTimeSymmetric) {
  auto map = build_kahan_map(parse_ode("x' = 0; y' = 0"));
  EXPECT_TRUE(check_time_symmetry(map, {{Rational(5), Rational(-7, 3)}}, Rational(2)).holds);
}

TEST(Kahan, CorruptedMapFailsTimeSymmetry) {
  auto map = kdtest::Eq2::get().map;
  map.numerators[0] += canon("h^2");
  EXPECT_FALSE(check_time_symmetry(map, {{1, 1, 1}}, Rational(1, 10)).holds);
}

TEST(Kahan, SingularPointsAreSkipped) {
  auto map = build_kahan_map(parse_ode("x' = x^2"));
  // 1 - h x = 0 at x = 10, h = 1/10.
  auto r = check_time_symmetry(map, {{Rational(10)}, {Rational(1)}}, Rational(1, 10));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.skipped, std::vector<std::size_t>{0});
}

TEST(Kahan, BuilderInterface) {
  KahanMapBuilder builder;
  EXPECT_EQ(builder.name(), "kahan");
  const MapBuilder& base = builder;
  EXPECT_EQ(base.build(parse_ode(kdtest::kEq2)).common_den, kdtest::Eq2::get().map.common_den);
}
