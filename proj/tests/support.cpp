#include "support.hpp"

#include <cmath>

namespace kdtest {

std::vector<double> reference_solution(double t, double k2, double k3, double k4) {
  const double e1 = std::exp(t);
  const double e2 = std::exp(2 * t);
  const double e3 = std::exp(3 * t);
  const double den = 2 * e3 * k2 * k3 + 3 * e2 * k2 - k3;
  return {(6 * e2 * k4 * k2 + 2 * (-3 * e1 * k2 + (1 + k2 * e3) * k4) * k3) / (k4 * den), -6 * k2 * e2 / den,
          (-3 * k3 + 3 * e2 * k2) / den};
}

kd::QuadraticOde random_ode(kd::RationalSampler& rng, int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("u" + std::to_string(i + 1));
  kd::QuadraticOde ode(n, names);
  auto coef = [&] { return rng.next_int(0, 2) == 0 ? kd::Rational(rng.next_int(-2, 2)) : kd::Rational(0); };
  for (int i = 0; i < n; ++i) {
    ode.set_constant(i, coef());
    for (int j = 0; j < n; ++j) {
      ode.set_linear(i, j, coef());
      for (int k = j; k < n; ++k) ode.set_quadratic(i, j, k, coef());
    }
  }
  return ode;
}

kd::MultiPoly random_product(kd::RationalSampler& rng, int& n) {
  using kd::Monomial;
  using kd::MultiPoly;
  using kd::Rational;
  n = 1 + static_cast<int>(rng.next_int(0, 2));
  const int count = 1 + static_cast<int>(rng.next_int(0, 2));
  MultiPoly product = MultiPoly::constant(n, rng.next_int(1, 5) * (rng.next_int(0, 1) ? 1 : -1));
  for (int c = 0; c < count; ++c) {
    std::vector<MultiPoly::Term> terms;
    for (int slot = 0; slot <= n; ++slot) {
      terms.push_back({Monomial::unit(slot), Rational(rng.next_int(-3, 3))});
      if (rng.next_int(0, 2) == 0) terms.push_back({Monomial::unit(slot, 2), Rational(rng.next_int(-2, 2))});
    }
    terms.push_back({Monomial(), Rational(rng.next_int(-4, 4))});
    MultiPoly f(n, terms);
    if (f.is_constant()) f += MultiPoly::variable(n, 0);
    product *= f.pow(1 + static_cast<int>(rng.next_int(0, 1)));
  }
  return product;
}

}  // namespace kdtest
