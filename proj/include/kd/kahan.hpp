#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kd/ode.hpp"
#include "kd/rational_function.hpp"

namespace kd {

// x'_i = numerators[i] / common_den. Numerators and denominator are kept
// unreduced: common_den is exactly det(I - (h/2) f'(x)).
struct BirationalMap {
  int n = 0;
  std::vector<MultiPoly> numerators;
  MultiPoly common_den;
  QuadraticOde source;

  RationalFunction component(int i) const { return RationalFunction(numerators[i], common_den); }
  // Image of a point (x_1..x_n, h); std::nullopt when the denominator vanishes.
  std::optional<std::vector<Rational>> apply(std::span<const Rational> point) const;
};

struct JacobianData {
  RationalFunction J;
};

// Discretization schemes producing a birational map from a quadratic ODE.
class MapBuilder {
 public:
  virtual ~MapBuilder() = default;
  virtual std::string_view name() const = 0;
  virtual BirationalMap build(const QuadraticOde& ode) const = 0;
};

class KahanMapBuilder final : public MapBuilder {
 public:
  std::string_view name() const override { return "kahan"; }
  // x' = x + h adj(M) f(x) / det(M), M = I - (h/2) f'(x).
  // Throws DegenerateMap if det(M) is the zero polynomial.
  BirationalMap build(const QuadraticOde& ode) const override;
};

BirationalMap build_kahan_map(const QuadraticOde& ode);

// J = det(d phi_i / d x_j), reduced.
JacobianData jacobian_determinant(const BirationalMap& map);

struct TimeSymmetryResult {
  bool holds = true;
  std::vector<std::size_t> skipped;  // indices of points where a denominator vanished
};

// phi_{-h0}(phi_{h0}(p)) == p exactly at every usable point.
TimeSymmetryResult check_time_symmetry(const BirationalMap& map, const std::vector<std::vector<Rational>>& points,
                                       const Rational& h0);

}  // namespace kd
