#include "kd/unipoly.hpp"

#include <algorithm>

#include "kd/errors.hpp"

namespace kd {

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UniPoly UniPoly::monomial(int degree, const Rational& v) {
  std::vector<Rational> c(degree + 1);
  c[degree] = v;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator-() const {
  UniPoly r(*this);
  for (auto& x : r.c_) x = -x;
  return r;
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UniPoly(std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  Rational prod;
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      mpq_mul(prod.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
      c[i + j] += prod;
    }
  }
  return UniPoly(std::move(c));
}

UniPoly operator*(const UniPoly& a, const Rational& s) {
  if (s == 0) return {};
  UniPoly r(a);
  for (auto& x : r.c_) x *= s;
  return r;
}

Rational UniPoly::eval(const Rational& t) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return {};
  Rational inv = 1 / lead();
  return *this * inv;
}

UniPoly UniPoly::primitive() const {
  if (is_zero()) return {};
  Integer l = lcm_of_denominators(c_);
  std::vector<Rational> scaled(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) scaled[i] = c_[i] * l;
  Integer g = gcd_of_numerators(scaled);
  if (scaled.back() < 0) g = -g;
  for (auto& x : scaled) x /= g;
  return UniPoly(std::move(scaled));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& b) const {
  if (b.is_zero()) throw InvalidInput("division by zero polynomial");
  if (degree() < b.degree()) return {UniPoly{}, *this};
  std::vector<Rational> r = c_;
  std::vector<Rational> q(degree() - b.degree() + 1);
  Rational inv = 1 / b.lead();
  Rational prod;
  for (int k = degree() - b.degree(); k >= 0; --k) {
    Rational f = r[k + b.degree()] * inv;
    q[k] = f;
    if (f == 0) continue;
    for (int j = 0; j <= b.degree(); ++j) {
      mpq_mul(prod.get_mpq_t(), f.get_mpq_t(), b.c_[j].get_mpq_t());
      r[k + j] -= prod;
    }
  }
  r.resize(b.degree());
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly UniPoly::exact_div(const UniPoly& b) const {
  auto [q, r] = divmod(b);
  if (!r.is_zero()) throw NotDivisible("univariate division leaves a remainder");
  return q;
}

UniPoly UniPoly::from_multipoly(const MultiPoly& p, int slot) {
  if (!p.is_univariate_in(slot)) throw InvalidInput("polynomial is not univariate in the requested slot");
  std::vector<Rational> c(std::max(p.degree(slot), 0) + 1);
  for (const auto& t : p.terms()) c[t.mono[slot]] = t.coef;
  return UniPoly(std::move(c));
}

MultiPoly UniPoly::to_multipoly(int nvars, int slot) const {
  std::vector<MultiPoly::Term> terms;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] != 0) terms.push_back({Monomial::unit(slot, static_cast<int>(k)), c_[k]});
  }
  return MultiPoly(nvars, std::move(terms));
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = x.divmod(y).second;
    x = std::move(y);
    y = r.is_zero() ? r : r.primitive();  // keep coefficient size in check
  }
  return x.monic();
}

ExtendedGcd extended_gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly r0 = a, r1 = b;
  UniPoly s0 = UniPoly::constant(1), s1;
  UniPoly t0, t1 = UniPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    UniPoly s2 = s0 - q * s1;
    UniPoly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Rational inv = 1 / r0.lead();
  return {r0 * inv, s0 * inv, t0 * inv};
}

}  // namespace kd
