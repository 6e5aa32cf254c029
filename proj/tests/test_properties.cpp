#include <gtest/gtest.h>

#include "kd/errors.hpp"
#include "kd/verify.hpp"
#include "support.hpp"

using namespace kd;

using kdtest::random_ode;

TEST(Property, RandomSystemsDarbouxAndContinuum) {
  RationalSampler rng(31337);
  int searched = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_int(0, 1));
    auto ode = random_ode(rng, n);
    auto map = build_kahan_map(ode);

    // Reversibility at 5 exact points.
    auto pts = sample_points(n, 5, 100 + trial);
    EXPECT_TRUE(check_time_symmetry(map, pts, Rational(1, 5)).holds) << print_ode(ode);

    auto J = jacobian_determinant(map);
    FactorBasis basis;
    try {
      basis = factor_basis(J.J);
    } catch (const ResourceBudgetExceeded&) {
      continue;
    }
    EXPECT_EQ(basis.reconstruct(n), J.J);
    DarbouxOptions opt;
    opt.max_degree = n == 2 ? 2 : 1;
    opt.max_exp = 1;
    opt.max_candidates = 2000;
    auto s = search_all(map, basis, opt);
    ++searched;
    for (const auto& p : s.pairs) {
      EXPECT_TRUE(verify_dp_exact(map, basis, p)) << print_ode(ode) << p.P.to_string();
      if (p.cofactor.sign < 0) continue;
      auto cp = continuum_limit(p, basis, ode);
      EXPECT_TRUE(continuum_identity_holds(cp, ode)) << print_ode(ode) << p.P.to_string();
    }
  }
  EXPECT_GE(searched, 45);
}

TEST(Property, PipelineDeterminism) {
  RationalSampler rng(4242);
  for (int trial = 0; trial < 3; ++trial) {
    auto ode = random_ode(rng, 2);
    PipelineConfig c;
    c.ode_text = print_ode(ode);
    c.max_dp_degree = 2;
    c.seed = 7;
    const auto a = emit_report(run_pipeline(c), ReportFormat::Json);
    const auto b = emit_report(run_pipeline(c), ReportFormat::Json);
    EXPECT_EQ(a, b);
    EXPECT_EQ(emit_report(read_report(a), ReportFormat::Json), a);
  }
}

TEST(Property, PrintParseRoundTripOnRandomSystems) {
  RationalSampler rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto ode = random_ode(rng, 1 + static_cast<int>(rng.next_int(0, 3)));
    EXPECT_EQ(parse_ode(print_ode(ode)), ode);
  }
}
