#pragma once

#include <utility>
#include <vector>

#include "kd/multipoly.hpp"
#include "kd/rational.hpp"

namespace kd {

// Dense univariate polynomial over Q; coeffs[k] multiplies t^k and the last
// coefficient is nonzero (empty vector is zero).
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UniPoly constant(const Rational& v) { return UniPoly(std::vector<Rational>{v}); }
  static UniPoly monomial(int degree, const Rational& v = 1);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& operator[](int k) const { return c_[k]; }
  Rational coeff(int k) const { return k < static_cast<int>(c_.size()) && k >= 0 ? c_[k] : Rational(0); }
  const Rational& lead() const { return c_.back(); }

  UniPoly operator-() const;
  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const Rational& s);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  Rational eval(const Rational& t) const;
  UniPoly derivative() const;
  UniPoly monic() const;
  // Scale to integer coefficients with gcd 1 and positive leading coefficient.
  UniPoly primitive() const;

  // (quotient, remainder)
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& b) const;
  UniPoly exact_div(const UniPoly& b) const;  // throws NotDivisible

  // Conversions to/from MultiPoly univariate in `slot`.
  static UniPoly from_multipoly(const MultiPoly& p, int slot);
  MultiPoly to_multipoly(int nvars, int slot) const;

 private:
  void trim();
  std::vector<Rational> c_;
};

UniPoly gcd(const UniPoly& a, const UniPoly& b);  // monic, gcd(0,0) = 0
// Returns (g, s, t) with s*a + t*b = g, g monic.
struct ExtendedGcd {
  UniPoly g, s, t;
};
ExtendedGcd extended_gcd(const UniPoly& a, const UniPoly& b);

}  // namespace kd
