#include "kd/kahan.hpp"

#include "kd/errors.hpp"
#include "kd/gcd.hpp"
#include "kd/linear_algebra.hpp"

namespace kd {

std::optional<std::vector<Rational>> BirationalMap::apply(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != n + 1) throw InvalidInput("map point must have n + 1 coordinates");
  Rational d = common_den.eval(point);
  if (d == 0) return std::nullopt;
  std::vector<Rational> image(n);
  for (int i = 0; i < n; ++i) image[i] = numerators[i].eval(point) / d;
  return image;
}

BirationalMap KahanMapBuilder::build(const QuadraticOde& ode) const {
  const int n = ode.dimension();
  const auto f = rhs(ode);
  const auto jac = jacobian_matrix(ode);
  const MultiPoly h = MultiPoly::variable(n, n);
  const MultiPoly half_h = h * Rational(1, 2);

  PolyMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      MultiPoly e = -(half_h * jac[i][j]);
      if (i == j) e += MultiPoly::constant(n, 1);
      m[i].push_back(std::move(e));
    }
  }
  MultiPoly det = determinant(m, n);
  if (det.is_zero()) throw DegenerateMap("det(I - h/2 f'(x)) vanishes identically", "kahan");
  PolyMatrix adj = adjugate(m, n);

  BirationalMap map;
  map.n = n;
  map.common_den = det;
  map.source = ode;
  for (int i = 0; i < n; ++i) {
    MultiPoly step(n);
    for (int j = 0; j < n; ++j) step += adj[i][j] * f[j];
    map.numerators.push_back(MultiPoly::variable(n, i) * det + h * step);
  }
  return map;
}

BirationalMap build_kahan_map(const QuadraticOde& ode) { return KahanMapBuilder{}.build(ode); }

JacobianData jacobian_determinant(const BirationalMap& map) {
  const int n = map.n;
  const MultiPoly& d = map.common_den;
  // det(D dN - N grad(D)^T) = D^(n-1) det([[D, grad D], [N, dN]]), so
  // J = det(bordered) / D^(n+1).
  PolyMatrix bordered(n + 1);
  bordered[0].push_back(d);
  for (int j = 0; j < n; ++j) bordered[0].push_back(d.derivative(j));
  for (int i = 0; i < n; ++i) {
    bordered[i + 1].push_back(map.numerators[i]);
    for (int j = 0; j < n; ++j) bordered[i + 1].push_back(map.numerators[i].derivative(j));
  }
  MultiPoly num = determinant(bordered, n);
  MultiPoly den = MultiPoly::constant(n, 1);
  // Cancel one copy of D at a time; gcds against D are far cheaper than
  // against D^(n+1) and the result is fully reduced.
  for (int k = 0; k <= n; ++k) {
    MultiPoly g = d.is_constant() ? MultiPoly::constant(n, 1) : poly_gcd(num, d);
    num = num.exact_div(g);
    den = den * d.exact_div(g);
  }
  JacobianData data{RationalFunction::from_coprime(std::move(num), std::move(den))};

  // J(x, 0) = 1 for any consistent one-step map.
  MultiPoly n0 = data.J.num().partial_eval(n, 0);
  MultiPoly d0 = data.J.den().partial_eval(n, 0);
  if (n0 != d0) throw InvalidInput("Jacobian determinant does not reduce to 1 at h = 0");
  return data;
}

TimeSymmetryResult check_time_symmetry(const BirationalMap& map, const std::vector<std::vector<Rational>>& points,
                                       const Rational& h0) {
  TimeSymmetryResult result;
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::vector<Rational> p = points[k];
    p.push_back(h0);
    auto forward = map.apply(p);
    if (!forward) {
      result.skipped.push_back(k);
      continue;
    }
    forward->push_back(-h0);
    auto back = map.apply(*forward);
    if (!back) {
      result.skipped.push_back(k);
      continue;
    }
    for (int i = 0; i < map.n; ++i) {
      if ((*back)[i] != points[k][i]) result.holds = false;
    }
  }
  return result;
}

}  // namespace kd
