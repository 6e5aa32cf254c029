#include "kd/rational_function.hpp"

#include "kd/errors.hpp"
#include "kd/gcd.hpp"

namespace kd {

RationalFunction::RationalFunction(MultiPoly num)
    : num_(std::move(num)), den_(MultiPoly::constant(num_.nvars(), 1)) {}

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw InvalidInput("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = MultiPoly::constant(num_.nvars(), 1);
    return;
  }
  if (!den_.is_constant()) {
    MultiPoly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = num_.exact_div(g);
      den_ = den_.exact_div(g);
    }
  }
  normalize_den();
}

RationalFunction RationalFunction::from_coprime(MultiPoly num, MultiPoly den) {
  RationalFunction r;
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  if (r.den_.is_zero()) throw InvalidInput("rational function with zero denominator");
  if (r.num_.is_zero()) r.den_ = MultiPoly::constant(r.num_.nvars(), 1);
  r.normalize_den();
  return r;
}

void RationalFunction::normalize_den() {
  auto [content, prim] = den_.rational_content();
  den_ = std::move(prim);
  num_ = num_.divide_by(content);
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.num_.is_zero() || b.num_.is_zero()) return RationalFunction(MultiPoly(a.nvars()));
  if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ * b.num_);
  // Cross-cancel first so the gcds run on smaller inputs.
  MultiPoly g1 = poly_gcd(a.num_, b.den_);
  MultiPoly g2 = poly_gcd(b.num_, a.den_);
  MultiPoly n = a.num_.exact_div(g1) * b.num_.exact_div(g2);
  MultiPoly d = a.den_.exact_div(g2) * b.den_.exact_div(g1);
  return RationalFunction::from_coprime(std::move(n), std::move(d));
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw InvalidInput("division by zero rational function");
  RationalFunction inv;
  inv.num_ = b.den_;
  inv.den_ = b.num_;
  inv.normalize_den();
  return a * inv;
}

RationalFunction RationalFunction::pow(int e) const {
  if (e < 0) {
    if (is_zero()) throw InvalidInput("negative power of zero");
    RationalFunction inv;
    inv.num_ = den_;
    inv.den_ = num_;
    inv.normalize_den();
    return inv.pow(-e);
  }
  return from_coprime(num_.pow(e), den_.pow(e));
}

RationalFunction RationalFunction::derivative(int slot) const {
  MultiPoly n = num_.derivative(slot) * den_ - num_ * den_.derivative(slot);
  return RationalFunction(std::move(n), den_ * den_);
}

Rational RationalFunction::eval(std::span<const Rational> point) const {
  Rational d = den_.eval(point);
  if (d == 0) throw InvalidInput("denominator vanishes at evaluation point");
  return num_.eval(point) / d;
}

std::string RationalFunction::to_string() const {
  auto names = MultiPoly::default_names(nvars());
  return to_string(names);
}

std::string RationalFunction::to_string(std::span<const std::string> names) const {
  if (den_.is_one()) return num_.to_string(names);
  return "(" + num_.to_string(names) + ")/(" + den_.to_string(names) + ")";
}

RationalFunction substitute(const MultiPoly& p, int slot, const RationalFunction& value) {
  if (slot < 0 || slot >= p.nslots()) throw InvalidInput("substitution slot out of range");
  if (value.den().is_zero()) throw InvalidInput("substituted value has zero denominator");
  if (!p.depends_on(slot)) return RationalFunction(p);
  auto coeffs = p.coefficients_in(slot);
  const int d = static_cast<int>(coeffs.size()) - 1;
  // sum_k c_k n^k d^(deg-k) / d^deg, by Horner in (n, d)
  MultiPoly acc = coeffs[d];
  MultiPoly den_power = MultiPoly::constant(p.nvars(), 1);
  for (int k = d - 1; k >= 0; --k) {
    den_power = den_power * value.den();
    acc = acc * value.num() + coeffs[k] * den_power;
  }
  return RationalFunction(std::move(acc), value.den().pow(d));
}

bool same_quotient(const MultiPoly& n1, const MultiPoly& d1, const MultiPoly& n2, const MultiPoly& d2) {
  return n1 * d2 == n2 * d1;
}

}  // namespace kd
