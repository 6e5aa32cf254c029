#include <gtest/gtest.h>

#include "kd/errors.hpp"
#include "support.hpp"

using namespace kd;
using kdtest::canon;

namespace {

bool contains_up_to_unit(const FactorList& list, const MultiPoly& p, int mult) {
  for (const auto& [f, m] : list) {
    if (m == mult && kdtest::same_up_to_unit(f, p)) return true;
  }
  return false;
}

}  // namespace

TEST(Factor, SquarefreeDecomposition) {
  auto parts = squarefree_decompose(canon("(x1 - h)^2*(x2 + 1)", 2));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_TRUE(contains_up_to_unit(parts, canon("x1 - h", 2), 2));
  EXPECT_TRUE(contains_up_to_unit(parts, canon("x2 + 1", 2), 1));
}

TEST(Factor, SquarefreeInputIsItself) {
  auto p = canon("3*x1^2 + x2*h - 1", 2);
  auto parts = squarefree_decompose(p);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_TRUE(kdtest::same_up_to_unit(parts[0].first, p));
  EXPECT_EQ(parts[0].second, 1);
}

TEST(Factor, SquarefreeJacobianDenominator) {
  auto parts = squarefree_decompose(canon(kdtest::kRefD1) * canon(kdtest::kRefD2).pow(4));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_TRUE(contains_up_to_unit(parts, canon(kdtest::kRefD1), 1));
  EXPECT_TRUE(contains_up_to_unit(parts, canon(kdtest::kRefD2), 4));
}

TEST(Factor, JacobianNumeratorFactors) {
  const auto& e = kdtest::Eq2::get();
  auto fz = factor_irreducible(e.J.J.num());
  ASSERT_EQ(fz.factors.size(), 4u);
  for (const char* k : {kdtest::kRefK1, kdtest::kRefK2, kdtest::kRefK3, kdtest::kRefK4}) {
    EXPECT_TRUE(contains_up_to_unit(fz.factors, canon(k), 1)) << k;
  }
  EXPECT_EQ(fz.expand(3), e.J.J.num());
}

TEST(Factor, FactorBasisOfJacobian) {
  const auto& e = kdtest::Eq2::get();
  EXPECT_EQ(e.basis.numerator_factors.size(), 4u);
  ASSERT_EQ(e.basis.denominator_factors.size(), 2u);
  EXPECT_TRUE(contains_up_to_unit(e.basis.denominator_factors, canon(kdtest::kRefD1), 1));
  EXPECT_TRUE(contains_up_to_unit(e.basis.denominator_factors, canon(kdtest::kRefD2), 4));
  EXPECT_EQ(e.basis.reconstruct(3), e.J.J);
}

TEST(Factor, DifferenceOfSquares) {
  auto fz = factor_irreducible(canon("x1^2 - h^2", 1));
  ASSERT_EQ(fz.factors.size(), 2u);
  EXPECT_TRUE(contains_up_to_unit(fz.factors, canon("x1 - h", 1), 1));
  EXPECT_TRUE(contains_up_to_unit(fz.factors, canon("x1 + h", 1), 1));
}

TEST(Factor, IrreducibleQuadratic) {
  auto p = canon("x1^2 + x2^2 + 1", 2);
  auto fz = factor_irreducible(p);
  ASSERT_EQ(fz.factors.size(), 1u);
  EXPECT_EQ(fz.factors[0].first, p);
  EXPECT_EQ(is_irreducible(p).verdict, Irreducibility::Irreducible);
}

TEST(Factor, UnivariateOverIntegers) {
  // (x^2 + 1)(x^2 - 2)(3x + 5)(x - 1)^2
  auto p = canon("(x1^2 + 1)*(x1^2 - 2)*(3*x1 + 5)*(x1 - 1)^2", 1);
  auto fz = factor_irreducible(p);
  EXPECT_EQ(fz.factors.size(), 4u);
  EXPECT_TRUE(contains_up_to_unit(fz.factors, canon("x1 - 1", 1), 2));
  EXPECT_TRUE(contains_up_to_unit(fz.factors, canon("x1^2 - 2", 1), 1));
  EXPECT_EQ(fz.expand(1), p);
}

TEST(Factor, SwinnertonDyerStyleRecombination) {
  // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime.
  auto p = canon("x1^4 - 10*x1^2 + 1", 1);
  EXPECT_EQ(factor_irreducible(p).factors.size(), 1u);
}

TEST(Factor, ContentInOneSlot) {
  auto p = canon("(h + 2)*(x1*h + x2 - 1)", 2);
  auto fz = factor_irreducible(p);
  ASSERT_EQ(fz.factors.size(), 2u);
  EXPECT_TRUE(contains_up_to_unit(fz.factors, canon("h + 2", 2), 1));
}

TEST(Factor, IsIrreducibleVerdicts) {
  EXPECT_EQ(is_irreducible(canon("x1 - h", 1)).verdict, Irreducibility::Irreducible);
  auto r = is_irreducible(canon("(x1 + 1)*(x1 + 2)", 1));
  ASSERT_EQ(r.verdict, Irreducibility::Reducible);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(kdtest::same_up_to_unit(*r.witness, canon("x1 + 1", 1)) ||
              kdtest::same_up_to_unit(*r.witness, canon("x1 + 2", 1)));
}

TEST(Factor, ReferenceFactorsAreIrreducible) {
  for (const char* k : {kdtest::kRefK1, kdtest::kRefK2, kdtest::kRefK3, kdtest::kRefK4,
                        kdtest::kRefD1, kdtest::kRefD2}) {
    EXPECT_EQ(is_irreducible(canon(k)).verdict, Irreducibility::Irreducible) << k;
  }
}

TEST(Factor, DegreeCapRaisesBudgetError) {
  FactorOptions opt;
  opt.max_total_degree = 3;
  EXPECT_THROW(factor_irreducible(canon("x1^5 - 1", 1), opt), ResourceBudgetExceeded);
}

TEST(Factor, ZeroAndConstants) {
  auto fz = factor_irreducible(canon("-6", 2));
  EXPECT_TRUE(fz.factors.empty());
  EXPECT_EQ(fz.unit, -6);
  auto basis = factor_basis(RationalFunction(canon("4", 1), canon("1", 1)));
  EXPECT_EQ(basis.size(), 0u);
  EXPECT_EQ(basis.reconstruct(1), RationalFunction(canon("4", 1)));
}

TEST(FactorProperty, ReconstructionOfRandomProducts) {
  RationalSampler rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 0;
    auto product = kdtest::random_product(rng, n);
    auto fz = factor_irreducible(product);
    EXPECT_EQ(fz.expand(n), product) << product.to_string();
    for (const auto& [f, m] : fz.factors) {
      EXPECT_EQ(f, f.normalized());
      EXPECT_GE(m, 1);
    }
  }
}
