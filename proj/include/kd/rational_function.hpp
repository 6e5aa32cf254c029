#pragma once

#include <span>
#include <string>

#include "kd/multipoly.hpp"

namespace kd {

// Reduced quotient num/den of polynomials. The denominator is integral with
// content 1 and a positive graded-lex leading coefficient; zero is 0/1.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(MultiPoly num);
  // Reduces by the gcd; throws InvalidInput when den is zero.
  RationalFunction(MultiPoly num, MultiPoly den);

  // Skip the gcd when the caller knows num and den are coprime.
  static RationalFunction from_coprime(MultiPoly num, MultiPoly den);

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  int nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction operator-() const { return from_coprime(-num_, den_); }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction pow(int e) const;
  RationalFunction derivative(int slot) const;
  // Throws InvalidInput when the denominator vanishes at the point.
  Rational eval(std::span<const Rational> point) const;

  std::string to_string() const;
  std::string to_string(std::span<const std::string> names) const;

 private:
  void normalize_den();

  MultiPoly num_;
  MultiPoly den_;
};

// p with `slot` replaced by `value`.
RationalFunction substitute(const MultiPoly& p, int slot, const RationalFunction& value);

// Equality of num/den pairs by cross multiplication, with no gcd.
bool same_quotient(const MultiPoly& n1, const MultiPoly& d1, const MultiPoly& n2, const MultiPoly& d2);

}  // namespace kd
