#include <gtest/gtest.h>

#include "kd/errors.hpp"
#include "kd/gcd.hpp"
#include "kd/linear_algebra.hpp"
#include "kd/rational_function.hpp"
#include "support.hpp"

using namespace kd;
using kdtest::canon;

TEST(ExactPoly, AddCancels) {
  EXPECT_EQ(poly_arith(canon("x1 + 1", 1), canon("x1 - 1", 1), PolyOp::add), canon("2*x1", 1));
}

TEST(ExactPoly, ExactDivDifferenceOfSquares) {
  EXPECT_EQ(poly_arith(canon("x1^2 - h^2", 1), canon("x1 - h", 1), PolyOp::exact_div), canon("x1 + h", 1));
}

TEST(ExactPoly, ExactDivThrowsWhenNotDivisible) {
  EXPECT_THROW(canon("x1^2 + 1", 1).exact_div(canon("x1 - 1", 1)), NotDivisible);
}

TEST(ExactPoly, ProductOfDenominatorFactorsIsKahanDeterminant) {
  // det(I - (h/2) f') expanded independently.
  const auto det = canon(
      "-1/8*x2*x3*h^3 + 1/4*x2*h^3 + 1/4*x2*h^2 - 1/4*x3^3*h^3 + 9/8*x3^2*h^3 + 5/4*x3^2*h^2 - 13/8*x3*h^3"
      " - 15/4*x3*h^2 - 2*x3*h + 3/4*h^3 + 11/4*h^2 + 3*h + 1");
  EXPECT_EQ(canon(kdtest::kRefD1) * canon(kdtest::kRefD2), det);
}

TEST(ExactPoly, GradedLexOrderAndCanonicalText) {
  auto p = canon("1 + x2 + x1^2 + x1*x2 + h", 2);
  EXPECT_EQ(p.to_string(), "x1^2 + x1*x2 + x2 + h + 1");
  EXPECT_EQ(parse_canonical(p.to_string(), 2), p);
  EXPECT_EQ(p.total_degree(), 2);
  EXPECT_EQ(p.degree(2), 1);
}

TEST(ExactPoly, RationalCoefficientsRoundTrip) {
  auto p = canon("-1/4*x1^3*h^3 + 7/8*x1 - 3", 1);
  EXPECT_EQ(parse_canonical(p.to_string(), 1), p);
  EXPECT_EQ(p.normalized(), canon("2*x1^3*h^3 - 7*x1 + 24", 1));
}

TEST(ExactPoly, GcdOfMonomials) {
  EXPECT_EQ(poly_gcd(canon("x1^2*x2", 2), canon("x1*x2^2", 2)), canon("x1*x2", 2));
}

TEST(ExactPoly, GcdWithZeroIsNormalized) {
  EXPECT_EQ(poly_gcd(canon("6*x1 + 4*h", 1), MultiPoly(1)), canon("3*x1 + 2*h", 1));
}

TEST(ExactPoly, GcdOfCommonLinearFactor) {
  auto a = canon("(x1 - h)*(x2 + 1)", 2);
  auto b = canon("(x1 - h)*(x2 - 1)", 2);
  auto g = poly_gcd(a, b);
  EXPECT_TRUE(kdtest::same_up_to_unit(g, canon("x1 - h", 2)));
  EXPECT_TRUE(a.try_div(g).has_value());
  EXPECT_TRUE(b.try_div(g).has_value());
}

TEST(ExactPoly, EvalAtRationalPoint) {
  std::vector<Rational> pt{Rational(2), Rational(1, 2)};
  EXPECT_EQ(poly_eval(canon("x1 + h", 1), pt), Rational(5, 2));
  EXPECT_EQ(poly_eval(MultiPoly(1), pt), 0);
}

TEST(ExactPoly, EvalReferenceFactorAtOnes) {
  std::vector<Rational> pt{1, 1, 1, 1};
  EXPECT_EQ(poly_eval(canon(kdtest::kRefK1), pt), Rational(-3, 4));
}

TEST(ExactPoly, ExactAndFloatEvaluationAgree) {
  auto p = canon(kdtest::kRefK4);
  RationalSampler rng(5);
  for (int i = 0; i < 20; ++i) {
    std::vector<Rational> q(4);
    std::vector<double> d(4);
    for (int j = 0; j < 4; ++j) {
      q[j] = rng.next_rational(9, 7);
      d[j] = q[j].get_d();
    }
    const double exact = p.eval(q).get_d();
    const double approx = p.eval_double(d);
    EXPECT_LE(std::fabs(exact - approx), 1e-12 * std::max(1.0, std::fabs(exact)));
  }
}

TEST(ExactPoly, SubstituteIntoSquare) {
  auto value = RationalFunction(canon("1 + h", 1), canon("1 - h", 1));
  auto r = substitute(canon("x1^2", 1), 0, value);
  EXPECT_EQ(r, RationalFunction(canon("(1 + h)^2", 1), canon("(1 - h)^2", 1)));
  EXPECT_EQ(substitute(canon("7", 1), 0, value), RationalFunction(canon("7", 1)));
}

TEST(ExactPoly, SubstituteKahanComponentTendsToIdentity) {
  const auto& e = kdtest::Eq2::get();
  auto r = substitute(canon("x2"), 1, e.map.component(1));
  auto at0 = RationalFunction(r.num().partial_eval(3, 0), r.den().partial_eval(3, 0));
  EXPECT_EQ(at0, RationalFunction(canon("x2")));
}

TEST(ExactPoly, RationalFunctionArithmetic) {
  RationalFunction a(canon("x1", 1), canon("x1 + 1", 1));
  RationalFunction b(canon("1", 1), canon("x1 + 1", 1));
  EXPECT_EQ(a + b, RationalFunction(canon("1", 1)));
  EXPECT_EQ((a * b).den(), canon("x1^2 + 2*x1 + 1", 1));
  EXPECT_EQ(a.pow(-1), RationalFunction(canon("x1 + 1", 1), canon("x1", 1)));
  EXPECT_THROW(RationalFunction(canon("1", 1), MultiPoly(1)), InvalidInput);
}

TEST(LinearAlgebra, NullspaceRowVector) {
  LinearSystem sys{{{canon("1", 0), canon("-1", 0)}}, std::nullopt};
  auto ns = nullspace_over_Qh(sys);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0][0], canon("1", 0));
  EXPECT_EQ(ns[0][1], canon("1", 0));
}

TEST(LinearAlgebra, NullspaceOverQh) {
  LinearSystem sys{{{canon("h", 0), canon("-1", 0)}, {canon("h^2", 0), canon("-h", 0)}}, std::nullopt};
  auto ns = nullspace_over_Qh(sys);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0][0], canon("1", 0));
  EXPECT_EQ(ns[0][1], canon("h", 0));
}

TEST(LinearAlgebra, IdentityHasTrivialNullspace) {
  LinearSystem sys{{{canon("1", 0), canon("0", 0)}, {canon("0", 0), canon("1", 0)}}, std::nullopt};
  EXPECT_TRUE(nullspace_over_Qh(sys).empty());
}

TEST(LinearAlgebra, RejectsStateVariables) {
  LinearSystem sys{{{canon("x1", 1)}}, std::nullopt};
  EXPECT_THROW(nullspace_over_Qh(sys), InvalidInput);
}

TEST(LinearAlgebra, SolveRational) {
  auto one = solve_rational({{Rational(1)}}, {Rational(2)}, 1);
  ASSERT_TRUE(one);
  EXPECT_EQ(one->particular, RationalVector{Rational(2)});
  EXPECT_TRUE(one->nullspace.empty());

  auto two = solve_rational({{Rational(1), Rational(1)}}, {Rational(0)}, 2);
  ASSERT_TRUE(two);
  EXPECT_EQ(two->particular, (RationalVector{0, 0}));
  ASSERT_EQ(two->nullspace.size(), 1u);
  EXPECT_EQ(two->nullspace[0][0] + two->nullspace[0][1], 0);

  EXPECT_FALSE(solve_rational({{Rational(0)}}, {Rational(1)}, 1));
}

TEST(LinearAlgebra, CofactorSystemContainsAllOnesMeasure) {
  const auto& e = kdtest::Eq2::get();
  // Rows: coefficients of the continuum cofactors in the monomials 1, z.
  RationalMatrix m(2, RationalVector(e.continuum.size()));
  const Monomial zmono = Monomial::unit(2);
  for (std::size_t i = 0; i < e.continuum.size(); ++i) {
    ASSERT_TRUE(e.continuum[i].Cbar.is_polynomial());
    m[0][i] = e.continuum[i].Cbar.num().constant_term();
    m[1][i] = e.continuum[i].Cbar.num().coefficient(zmono);
  }
  auto sol = solve_rational(m, {Rational(-6), Rational(4)}, e.continuum.size());
  ASSERT_TRUE(sol);
  RationalVector ones(e.continuum.size(), Rational(1));
  // ones - particular must lie in the nullspace span.
  RationalMatrix aug;
  for (const auto& v : sol->nullspace) aug.push_back(v);
  RationalVector diff(ones.size());
  for (std::size_t i = 0; i < ones.size(); ++i) diff[i] = ones[i] - sol->particular[i];
  const int r = rank_over_Q(aug);
  aug.push_back(diff);
  EXPECT_EQ(rank_over_Q(aug), r);
}

TEST(LinearAlgebra, DeterminantAndAdjugate) {
  PolyMatrix m{{canon("x1", 1), canon("h", 1)}, {canon("1", 1), canon("x1", 1)}};
  EXPECT_EQ(determinant(m, 1), canon("x1^2 - h", 1));
  auto adj = adjugate(m, 1);
  EXPECT_EQ(adj[0][0] * m[0][0] + adj[0][1] * m[1][0], canon("x1^2 - h", 1));
}
