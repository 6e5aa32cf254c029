#include "kd/monomial.hpp"

#include "kd/errors.hpp"

namespace kd {

Monomial::Monomial(std::span<const int> exponents) {
  if (static_cast<int>(exponents.size()) > kMaxSlots) {
    throw ResourceBudgetExceeded("too many variables for monomial packing");
  }
  for (std::size_t i = 0; i < exponents.size(); ++i) set(static_cast<int>(i), exponents[i]);
}

Monomial Monomial::unit(int slot, int exponent) {
  Monomial m;
  m.set(slot, exponent);
  return m;
}

void Monomial::set(int slot, int exponent) {
  if (exponent < 0) throw InvalidInput("negative exponent");
  int total = degree() - (*this)[slot] + exponent;
  if (exponent > kMaxDegree || total > kMaxDegree) {
    throw ResourceBudgetExceeded("monomial degree exceeds 255");
  }
  std::uint64_t& w = slot < 7 ? hi_ : lo_;
  w &= ~(std::uint64_t{0xff} << shift(slot));
  w |= static_cast<std::uint64_t>(exponent) << shift(slot);
  hi_ &= ~(std::uint64_t{0xff} << 56);
  hi_ |= static_cast<std::uint64_t>(total) << 56;
}

Monomial Monomial::operator*(const Monomial& other) const {
  // Every exponent is bounded by the total degree, so a bounded total means
  // no byte can carry into its neighbour.
  if (degree() + other.degree() > kMaxDegree) {
    throw ResourceBudgetExceeded("monomial degree exceeds 255");
  }
  Monomial r;
  r.hi_ = hi_ + other.hi_;
  r.lo_ = lo_ + other.lo_;
  return r;
}

bool Monomial::divides(const Monomial& other) const {
  for (int s = 0; s < kMaxSlots; ++s) {
    if ((*this)[s] > other[s]) return false;
  }
  return true;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  Monomial r;
  r.hi_ = hi_ - divisor.hi_;
  r.lo_ = lo_ - divisor.lo_;
  return r;
}

int Monomial::degree_in_first(int count) const {
  int d = 0;
  for (int s = 0; s < count; ++s) d += (*this)[s];
  return d;
}

}  // namespace kd
