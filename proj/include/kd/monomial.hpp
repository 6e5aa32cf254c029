#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace kd {

// Exponent vector packed into two 64-bit words so that graded-lex comparison
// is a plain comparison of (hi, lo). Byte 7 of `hi` holds the total degree,
// the remaining 15 bytes hold the exponents of slots 0..14 in order, slot 0
// most significant. Exponents and total degree are limited to 255.
class Monomial {
 public:
  static constexpr int kMaxSlots = 15;
  static constexpr int kMaxDegree = 255;

  Monomial() = default;
  explicit Monomial(std::span<const int> exponents);

  static Monomial unit(int slot, int exponent = 1);

  int operator[](int slot) const {
    return static_cast<int>((word(slot) >> shift(slot)) & 0xffU);
  }
  int degree() const { return static_cast<int>(hi_ >> 56); }
  bool is_one() const { return hi_ == 0 && lo_ == 0; }

  void set(int slot, int exponent);

  // Product; throws ResourceBudgetExceeded when the total degree overflows.
  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  // Precondition: divides(other) where this = other / divisor.
  Monomial operator/(const Monomial& divisor) const;

  // Degree restricted to the first `count` slots (e.g. the state variables).
  int degree_in_first(int count) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

  std::size_t hash() const {
    return std::hash<std::uint64_t>{}(hi_ * 0x9e3779b97f4a7c15ULL ^ lo_);
  }

 private:
  static constexpr int shift(int slot) { return slot < 7 ? 8 * (6 - slot) : 8 * (14 - slot); }
  std::uint64_t word(int slot) const { return slot < 7 ? hi_ : lo_; }

  std::uint64_t hi_ = 0;
  std::uint64_t lo_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace kd
