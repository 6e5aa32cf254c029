#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kd/monomial.hpp"
#include "kd/rational.hpp"

namespace kd {

// Sparse polynomial over Q in the state variables x_1..x_n plus the step
// parameter h, which always occupies the last slot (index n). Terms are kept
// in descending graded-lex order with no zero coefficients, so structural
// equality is polynomial equality.
class MultiPoly {
 public:
  struct Term {
    Monomial mono;
    Rational coef;
  };

  MultiPoly() = default;
  explicit MultiPoly(int nvars);
  // Sorts, merges equal monomials and drops zeros.
  MultiPoly(int nvars, std::vector<Term> terms);

  static MultiPoly constant(int nvars, const Rational& c);
  // slot in [0, nvars]; slot == nvars is h.
  static MultiPoly variable(int nvars, int slot);
  static MultiPoly monomial(int nvars, const Monomial& m, const Rational& c = 1);

  int nvars() const { return nvars_; }
  int nslots() const { return nvars_ + 1; }
  int h_slot() const { return nvars_; }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_one() const;

  // Leading term in graded-lex order; precondition !is_zero().
  const Term& leading_term() const { return terms_.front(); }
  const Rational& leading_coefficient() const { return terms_.front().coef; }
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;

  int total_degree() const;              // -1 for zero
  int degree(int slot) const;            // -1 for zero
  int min_degree(int slot) const;        // lowest power of slot present
  int state_degree() const;              // total degree in x only
  bool depends_on(int slot) const { return degree(slot) > 0; }
  std::vector<int> support() const;      // slots that occur
  bool is_univariate_in(int slot) const; // every other slot has exponent 0

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly pow(int e) const;
  MultiPoly mul_monomial(const Monomial& m, const Rational& c) const;

  // Exact division; throws NotDivisible when b does not divide *this.
  MultiPoly exact_div(const MultiPoly& b) const;
  std::optional<MultiPoly> try_div(const MultiPoly& b) const;
  MultiPoly divide_by(const Rational& c) const;

  MultiPoly derivative(int slot) const;

  Rational eval(std::span<const Rational> point) const;
  double eval_double(std::span<const double> point) const;
  long double eval_long_double(std::span<const long double> point) const;
  // Replace slot by a constant.
  MultiPoly partial_eval(int slot, const Rational& value) const;
  // Replace several slots at once; values[i] applies to slots[i].
  MultiPoly partial_eval(std::span<const int> slots, std::span<const Rational> values) const;
  // Substitute slot -> (slot + shift), used for Taylor expansion.
  MultiPoly shift(int slot, const Rational& amount) const;

  // Coefficients with respect to one slot: result[k] multiplies slot^k and
  // does not contain slot.
  std::vector<MultiPoly> coefficients_in(int slot) const;
  static MultiPoly from_coefficients(int nvars, int slot, const std::vector<MultiPoly>& coeffs);
  MultiPoly leading_coefficient_in(int slot) const;

  // Same polynomial with a different variable count, remapping slots through
  // `slot_map` (old slot -> new slot).
  MultiPoly remap(int new_nvars, std::span<const int> slot_map) const;

  // Scale to integer coefficients with gcd 1 and positive leading coefficient.
  MultiPoly normalized() const;
  // (content, primitive) with this == content * primitive and primitive
  // integral with gcd 1 and positive leading coefficient.
  std::pair<Rational, MultiPoly> rational_content() const;

  // Canonical text: `names` has one entry per slot; default x1..xn, h.
  std::string to_string() const;
  std::string to_string(std::span<const std::string> names) const;

  static std::vector<std::string> default_names(int nvars);

 private:
  void canonicalize();

  int nvars_ = 0;
  std::vector<Term> terms_;
};

// poly_arith entry point (add, sub, mul, exact_div).
enum class PolyOp { add, sub, mul, exact_div };
MultiPoly poly_arith(const MultiPoly& a, const MultiPoly& b, PolyOp op);

// Evaluate a polynomial at a point of length nvars + 1.
Rational poly_eval(const MultiPoly& p, std::span<const Rational> point);

}  // namespace kd
