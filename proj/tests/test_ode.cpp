#include <gtest/gtest.h>

#include <cmath>

#include "kd/errors.hpp"
#include "support.hpp"

using namespace kd;

TEST(OdeModel, ParsesTestSystemTensors) {
  auto ode = parse_ode(kdtest::kEq2);
  ASSERT_EQ(ode.dimension(), 3);
  EXPECT_EQ(ode.names(), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(ode.constant(0), 2);
  EXPECT_EQ(ode.linear(0, 0), -2);
  EXPECT_EQ(ode.quadratic(0, 0, 2), Rational(1, 2));
  EXPECT_EQ(ode.quadratic(0, 2, 0), Rational(1, 2));
  EXPECT_EQ(ode.quadratic(2, 2, 2), 1);
  EXPECT_EQ(ode.linear(2, 1), -1);
}

TEST(OdeModel, ZeroOde) {
  auto ode = parse_ode("x' = 0");
  EXPECT_EQ(ode.dimension(), 1);
  EXPECT_TRUE(rhs(ode)[0].is_zero());
  EXPECT_TRUE(divergence(ode).is_zero());
  EXPECT_TRUE(jacobian_matrix(ode)[0][0].is_zero());
}

TEST(OdeModel, RejectsCubic) { EXPECT_THROW(parse_ode("x' = x^3"), DegreeTooHigh); }

TEST(OdeModel, RejectsUnknownVariableWithLocation) {
  try {
    parse_ode("x' = x\ny' = x*w");
    FAIL() << "expected UnknownVariable";
  } catch (const UnknownVariable& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(OdeModel, RejectsJuxtaposition) { EXPECT_THROW(parse_ode("x' = 2x"), ParseError); }

TEST(OdeModel, RejectsDivisionOutsideLiterals) { EXPECT_THROW(parse_ode("x' = x/2"), ParseError); }

TEST(OdeModel, CommentsAndRationalLiterals) {
  auto ode = parse_ode("# comment\nu' = 1/3*u^2 - v  # trailing\nv' = -(u + v)\n");
  EXPECT_EQ(ode.quadratic(0, 0, 0), Rational(1, 3));
  EXPECT_EQ(ode.linear(1, 0), -1);
}

TEST(OdeModel, RhsOfTestSystem) {
  auto ode = parse_ode(kdtest::kEq2);
  auto f = rhs(ode);
  EXPECT_EQ(f[0], kdtest::poly(ode, "2 - 2*x + x*z"));
  EXPECT_EQ(f[1], kdtest::poly(ode, "-y + y*z"));
  EXPECT_EQ(f[2], kdtest::poly(ode, "-y - 3*z + z^2"));
}

TEST(OdeModel, PrintParseRoundTrip) {
  auto ode = parse_ode(kdtest::kEq2);
  auto again = parse_ode(print_ode(ode));
  EXPECT_EQ(again, ode);
  EXPECT_EQ(rhs(again), rhs(ode));
}

TEST(OdeModel, JsonTensorForm) {
  auto ode = parse_ode_json(R"({"n": 2, "names": ["p", "q"], "c": [1, "1/2"],
                                "b": [[0, 1], [-1, 0]],
                                "a": [[[0, 0], [0, 0]], [[1, 0], [0, 0]]]})");
  EXPECT_EQ(ode.constant(1), Rational(1, 2));
  EXPECT_EQ(ode.linear(0, 1), 1);
  EXPECT_EQ(ode.quadratic(1, 0, 0), 1);
  EXPECT_EQ(parse_ode_any(print_ode(ode)), ode);
}

TEST(OdeModel, JsonQuadraticIsSymmetrized) {
  auto ode = parse_ode_json(R"({"n": 2, "c": [0, 0], "b": [[0, 0], [0, 0]],
                                "a": [[[0, 1], [0, 0]], [[0, 0], [0, 0]]]})");
  EXPECT_EQ(ode.quadratic(0, 0, 1), ode.quadratic(0, 1, 0));
  EXPECT_EQ(rhs(ode)[0], kdtest::poly(ode, ode.names()[0] + "*" + ode.names()[1]));
}

TEST(OdeModel, JacobianOfTestSystem) {
  auto ode = parse_ode(kdtest::kEq2);
  auto jm = jacobian_matrix(ode);
  const char* expected[3][3] = {{"z - 2", "0", "x"}, {"0", "z - 1", "y"}, {"0", "-1", "2*z - 3"}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(jm[i][j], kdtest::poly(ode, expected[i][j])) << i << "," << j;
  }
  EXPECT_EQ(divergence(ode), kdtest::poly(ode, "4*z - 6"));
}

TEST(OdeModel, LinearOdeHasConstantJacobian) {
  auto ode = parse_ode("x' = 2*x - y; y' = 3*y");
  auto jm = jacobian_matrix(ode);
  EXPECT_EQ(jm[0][0], kdtest::poly(ode, "2"));
  EXPECT_EQ(jm[0][1], kdtest::poly(ode, "-1"));
  EXPECT_TRUE(jm[1][0].is_zero());
  EXPECT_EQ(jm[1][1], kdtest::poly(ode, "3"));
}

TEST(OdeModel, DivergenceIsLinearInTensors) {
  auto a = parse_ode("x' = x^2 + y; y' = x*y - 2*y");
  auto b = parse_ode("x' = 3*x*y - x; y' = y^2 + 1");
  auto sum = parse_ode("x' = x^2 + y + 3*x*y - x; y' = x*y - 2*y + y^2 + 1");
  EXPECT_EQ(divergence(sum), divergence(a) + divergence(b));
}

TEST(OdeModel, JacobianMatchesFiniteDifferences) {
  RationalSampler rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    QuadraticOde ode(3, {"a", "b", "c"});
    for (int i = 0; i < 3; ++i) {
      ode.set_constant(i, rng.next_rational());
      for (int j = 0; j < 3; ++j) {
        ode.set_linear(i, j, rng.next_rational());
        for (int k = j; k < 3; ++k) ode.set_quadratic(i, j, k, rng.next_rational());
      }
    }
    auto f = rhs(ode);
    auto jm = jacobian_matrix(ode);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) EXPECT_EQ(jm[i][j], f[i].derivative(j));
    }
    std::vector<double> p{rng.next_rational().get_d(), rng.next_rational().get_d(), rng.next_rational().get_d(), 0};
    const double eps = 1e-6;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        auto up = p;
        auto dn = p;
        up[j] += eps;
        dn[j] -= eps;
        const double fd = (f[i].eval_double(up) - f[i].eval_double(dn)) / (2 * eps);
        const double exact = jm[i][j].eval_double(p);
        EXPECT_LE(std::fabs(fd - exact), 1e-6 * std::max(1.0, std::fabs(exact)));
      }
    }
  }
}
