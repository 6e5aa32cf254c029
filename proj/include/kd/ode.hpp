#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kd/linear_algebra.hpp"
#include "kd/multipoly.hpp"
#include "kd/rational.hpp"

namespace kd {

// dx_i/dt = sum_jk a_ijk x_j x_k + sum_j b_ij x_j + c_i with a_ijk = a_ikj.
class QuadraticOde {
 public:
  QuadraticOde() = default;
  QuadraticOde(int n, std::vector<std::string> names);

  int dimension() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }
  // Display names for every polynomial slot: the state names, then "h".
  std::vector<std::string> slot_names() const;

  const Rational& quadratic(int i, int j, int k) const { return a_[(i * n_ + j) * n_ + k]; }
  const Rational& linear(int i, int j) const { return b_[i * n_ + j]; }
  const Rational& constant(int i) const { return c_[i]; }

  // Sets a_ijk and a_ikj together.
  void set_quadratic(int i, int j, int k, const Rational& v);
  void set_linear(int i, int j, const Rational& v) { b_[i * n_ + j] = v; }
  void set_constant(int i, const Rational& v) { c_[i] = v; }

  // Coefficient form of one component: x_j x_k with j != k gets 2 a_ijk.
  void set_component(int i, const MultiPoly& rhs);

  friend bool operator==(const QuadraticOde&, const QuadraticOde&) = default;

 private:
  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<Rational> a_;
  std::vector<Rational> b_;
  std::vector<Rational> c_;
};

// Text form: one `name' = expr` per statement; statements end at a newline
// or ';' and '#' starts a comment. Throws ParseError, DegreeTooHigh or
// UnknownVariable with line/column.
QuadraticOde parse_ode(std::string_view source);
// JSON tensor form {"n", "a", "b", "c", "names"}; entries are numbers or
// "p/q" strings. Quadratic coefficients are symmetrized.
QuadraticOde parse_ode_json(std::string_view json_text);
// Dispatches on the first non-blank character ('{' selects JSON).
QuadraticOde parse_ode_any(std::string_view source);

std::string print_ode(const QuadraticOde& ode);

// f_i over (x_1..x_n, h).
std::vector<MultiPoly> rhs(const QuadraticOde& ode);
PolyMatrix jacobian_matrix(const QuadraticOde& ode);
MultiPoly divergence(const QuadraticOde& ode);

}  // namespace kd
