#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace kd {

// GMP keeps mpq_class canonical (reduced, positive denominator, 0 == 0/1).
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// "p/q" or "p"; throws InvalidInput on malformed text.
Rational parse_rational(std::string_view text);

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// lcm of denominators / gcd of numerators over a list, used for content.
Integer lcm_of_denominators(const std::vector<Rational>& values);
Integer gcd_of_numerators(const std::vector<Rational>& values);

// Deterministic generator of small rationals for sample points. Uses the
// raw mt19937_64 stream (not std distributions) so sequences are identical
// across standard libraries.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [lo, hi]
  long next_int(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  Rational next_rational(long max_num = 9, long max_den = 7) {
    long p = next_int(-max_num, max_num);
    long q = next_int(1, max_den);
    return make_rational(p, q);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kd
