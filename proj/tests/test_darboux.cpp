#include <gtest/gtest.h>

#include "kd/errors.hpp"
#include "support.hpp"

using namespace kd;

namespace {

// Index of the basis numerator factor that equals `text` up to unit.
int k_index(const FactorBasis& b, const char* text) {
  for (std::size_t i = 0; i < b.numerator_factors.size(); ++i) {
    if (kdtest::same_up_to_unit(b.numerator_factors[i].first, kdtest::canon(text))) return static_cast<int>(i);
  }
  return -1;
}

int d_index(const FactorBasis& b, const char* text) {
  for (std::size_t i = 0; i < b.denominator_factors.size(); ++i) {
    if (kdtest::same_up_to_unit(b.denominator_factors[i].first, kdtest::canon(text))) return static_cast<int>(i);
  }
  return -1;
}

CofactorCandidate candidate(const FactorBasis& b, std::vector<const char*> ks, std::vector<const char*> ds) {
  CofactorCandidate c;
  c.f.assign(b.numerator_factors.size(), 0);
  c.g.assign(b.denominator_factors.size(), 0);
  for (auto* k : ks) c.f[k_index(b, k)] += 1;
  for (auto* d : ds) c.g[d_index(b, d)] += 1;
  return c;
}

}  // namespace

TEST(Darboux, EnumerationCount) {
  const auto& e = kdtest::Eq2::get();
  auto en = enumerate_cofactors(e.basis, 1, 100000);
  EXPECT_EQ(en.candidates.size(), 127u);
  EXPECT_EQ(en.total, 127u);
  EXPECT_FALSE(en.truncated);
  for (const auto& c : en.candidates) EXPECT_FALSE(c.is_tautology());
}

TEST(Darboux, EnumerationContainsTableCofactors) {
  const auto& e = kdtest::Eq2::get();
  auto en = enumerate_cofactors(e.basis, 1, 100000);
  auto has = [&](const CofactorCandidate& c) {
    return std::find(en.candidates.begin(), en.candidates.end(), c) != en.candidates.end();
  };
  for (auto* k : {kdtest::kRefK1, kdtest::kRefK2, kdtest::kRefK3}) {
    EXPECT_TRUE(has(candidate(e.basis, {k}, {kdtest::kRefD2})));
  }
  EXPECT_TRUE(has(candidate(e.basis, {kdtest::kRefK4}, {kdtest::kRefD1, kdtest::kRefD2})));
}

TEST(Darboux, EnumerationOrderAndTruncation) {
  const auto& e = kdtest::Eq2::get();
  auto en = enumerate_cofactors(e.basis, 1, 10);
  EXPECT_EQ(en.candidates.size(), 10u);
  EXPECT_EQ(en.total, 127u);
  EXPECT_TRUE(en.truncated);
  for (std::size_t i = 1; i < en.candidates.size(); ++i) {
    EXPECT_LE(en.candidates[i - 1].total_exponent(), en.candidates[i].total_exponent());
    EXPECT_EQ(en.candidates[i].sign, 1);
  }
}

TEST(Darboux, EmptyBasisHasNoCandidates) {
  EXPECT_TRUE(enumerate_cofactors(FactorBasis{}, 2, 100).candidates.empty());
}

TEST(Darboux, SolveForTwoZPlusY) {
  const auto& e = kdtest::Eq2::get();
  // The candidate whose continuum limit is z - 3.
  auto c = candidate(e.basis, {kdtest::kRefK1}, {kdtest::kRefD2});
  auto pairs = solve_dp(e.map, e.basis, c, 1);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_TRUE(kdtest::same_up_to_unit(pairs[0].P, kdtest::poly(e.ode, "2*z + y")));
}

TEST(Darboux, SolveForAffineSum) {
  const auto& e = kdtest::Eq2::get();
  auto c = candidate(e.basis, {kdtest::kRefK4}, {kdtest::kRefD1, kdtest::kRefD2});
  auto pairs = solve_dp(e.map, e.basis, c, 1);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_TRUE(kdtest::same_up_to_unit(pairs[0].P, kdtest::poly(e.ode, "x + y + z - 1")));
}

TEST(Darboux, InfeasibleCandidateGivesNothing) {
  const auto& e = kdtest::Eq2::get();
  auto c = candidate(e.basis, {kdtest::kRefK1, kdtest::kRefK2}, {});
  EXPECT_TRUE(solve_dp(e.map, e.basis, c, 1).empty());
}

TEST(Darboux, AffineSearchFindsTheFourPolynomials) {
  const auto& e = kdtest::Eq2::get();
  ASSERT_EQ(e.affine.pairs.size(), 4u);
  for (const char* p : {"z - y - 3", "2*z + y", "y", "x + y + z - 1"}) {
    const auto target = kdtest::poly(e.ode, p);
    int hits = 0;
    for (const auto& pair : e.affine.pairs) hits += kdtest::same_up_to_unit(pair.P, target);
    EXPECT_EQ(hits, 1) << p;
  }
  for (const auto& pair : e.affine.pairs) {
    EXPECT_FALSE(pair.reducible);
    EXPECT_EQ(pair.degree, 1);
    EXPECT_TRUE(verify_dp_exact(e.map, e.basis, pair));
    EXPECT_TRUE(verify_dp_at_points(e.map, pair, 99, 5));
  }
}

TEST(Darboux, PruningDoesNotChangeResults) {
  const auto& e = kdtest::Eq2::get();
  DarbouxOptions opt;
  opt.max_degree = 1;
  opt.max_exp = 1;
  opt.prune = false;
  auto full = search_all(e.map, e.basis, opt);
  ASSERT_EQ(full.pairs.size(), e.affine.pairs.size());
  for (std::size_t i = 0; i < full.pairs.size(); ++i) EXPECT_EQ(full.pairs[i].P, e.affine.pairs[i].P);
  EXPECT_EQ(full.pruned, 0u);
  EXPECT_GT(e.affine.pruned, 0u);
}

TEST(Darboux, ZeroOdeSearchIsEmptyWithNote) {
  auto map = build_kahan_map(parse_ode("x' = 0; y' = 0"));
  auto basis = factor_basis(jacobian_determinant(map).J);
  auto s = search_all(map, basis);
  EXPECT_TRUE(s.pairs.empty());
  EXPECT_FALSE(s.notes.empty());
}

TEST(Darboux, VerifyExactRejectsNonInvariant) {
  const auto& e = kdtest::Eq2::get();
  DarbouxPair bad;
  bad.P = kdtest::poly(e.ode, "y");
  bad.cofactor.f.assign(e.basis.numerator_factors.size(), 0);
  bad.cofactor.g.assign(e.basis.denominator_factors.size(), 0);
  bad.C = RationalFunction(kdtest::poly(e.ode, "1"));
  bad.degree = 1;
  EXPECT_FALSE(verify_dp_exact(e.map, e.basis, bad));
  // y(phi) - y at (1/2, 1/3, 1/5), h = 1/3.
  std::vector<Rational> pt{Rational(1, 2), Rational(1, 3), Rational(1, 5), Rational(1, 3)};
  auto img = e.map.apply(pt);
  ASSERT_TRUE(img);
  EXPECT_EQ((*img)[1] - pt[1], Rational(-106, 1203));
}

TEST(Darboux, ConstantWithUnitCofactorIsTautology) {
  const auto& e = kdtest::Eq2::get();
  DarbouxPair taut;
  taut.P = kdtest::poly(e.ode, "1");
  taut.cofactor.f.assign(e.basis.numerator_factors.size(), 0);
  taut.cofactor.g.assign(e.basis.denominator_factors.size(), 0);
  taut.C = RationalFunction(kdtest::poly(e.ode, "1"));
  EXPECT_TRUE(taut.cofactor.is_tautology());
  EXPECT_TRUE(verify_dp_exact(e.map, e.basis, taut));
}

TEST(Darboux, DefaultSearchAddsReducibleProducts) {
  const auto& e = kdtest::Eq2::get();
  auto s = search_all(e.map, e.basis, DarbouxOptions{2, 2, 10000, true, 0x64617262});
  std::size_t irreducible = 0;
  for (const auto& p : s.pairs) {
    irreducible += !p.reducible;
    EXPECT_TRUE(verify_dp_exact(e.map, e.basis, p));
  }
  EXPECT_EQ(irreducible, 4u);
  EXPECT_EQ(s.pairs.size(), 14u);
}

TEST(Darboux, CofactorFunctionHasUnitLimit) {
  const auto& e = kdtest::Eq2::get();
  for (const auto& p : e.affine.pairs) {
    auto at0 = RationalFunction(p.C.num().partial_eval(3, 0), p.C.den().partial_eval(3, 0));
    EXPECT_EQ(at0, RationalFunction(kdtest::poly(e.ode, "1")));
    EXPECT_EQ(p.C, cofactor_function(e.basis, p.cofactor, 3));
  }
}
