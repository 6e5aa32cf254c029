#pragma once

// Internal building blocks of the factorizer. Not installed.

#include <cstdint>
#include <optional>
#include <vector>

#include "kd/multipoly.hpp"
#include "kd/rational.hpp"
#include "kd/unipoly.hpp"

namespace kd::detail {

// Dense polynomial over F_p, coefficient k multiplies x^k, reduced to [0, p).
using FpPoly = std::vector<std::uint64_t>;

struct PrimeField {
  std::uint64_t p;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }

  FpPoly reduce(const std::vector<Integer>& f) const;
  void trim(FpPoly& f) const;
  FpPoly add(const FpPoly& a, const FpPoly& b) const;
  FpPoly sub(const FpPoly& a, const FpPoly& b) const;
  FpPoly mul(const FpPoly& a, const FpPoly& b) const;
  // (quotient, remainder)
  std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b) const;
  FpPoly mod(const FpPoly& a, const FpPoly& b) const { return divmod(a, b).second; }
  FpPoly monic(const FpPoly& a) const;
  FpPoly gcd(FpPoly a, FpPoly b) const;  // monic
  // s*a + t*b = 1 for coprime a, b.
  std::pair<FpPoly, FpPoly> bezout(const FpPoly& a, const FpPoly& b) const;
  FpPoly derivative(const FpPoly& a) const;
  FpPoly powmod(FpPoly base, const Integer& e, const FpPoly& m) const;
};

// Irreducible factors over F_p of a monic squarefree polynomial, sorted.
std::vector<FpPoly> factor_mod_p(const PrimeField& F, const FpPoly& f, RationalSampler& rng);

// Irreducible factors over Z of a primitive squarefree polynomial of degree
// >= 1 (coefficient k multiplies x^k). Factors are primitive with positive
// leading coefficient.
std::vector<std::vector<Integer>> factor_squarefree_zz(const std::vector<Integer>& f, RationalSampler& rng);

// Same over Q for a squarefree univariate polynomial.
std::vector<UniPoly> factor_squarefree_q(const UniPoly& f, RationalSampler& rng);

struct LiftBudget {
  std::size_t max_terms = 20000;
  int max_subset_factors = 16;
  int evaluation_attempts = 12;
};

// Irreducible factors of q, which must be squarefree, primitive in `main`
// and depend on `main` and at least one more slot. Returns std::nullopt when
// no admissible evaluation point was found.
std::optional<std::vector<MultiPoly>> factor_multivariate(const MultiPoly& q, int main, RationalSampler& rng,
                                                          const LiftBudget& budget);

// Helpers shared with the irreducibility test.
struct Restriction {
  std::vector<int> slots;
  std::vector<Rational> values;
  UniPoly image;
};
// A random restriction of q to `main` that keeps the degree in `main` and is
// squarefree; std::nullopt after `attempts` failures.
std::optional<Restriction> admissible_restriction(const MultiPoly& q, int main, RationalSampler& rng, int attempts);

}  // namespace kd::detail
