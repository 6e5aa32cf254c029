#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kd/factor.hpp"
#include "kd/kahan.hpp"

namespace kd {

// C = sign * prod Khat_i^f_i / prod Dhat_j^g_j over the factor basis, where
// Fhat = F / F(x, 0) so that C(x, 0) = sign.
struct CofactorCandidate {
  int sign = 1;
  std::vector<int> f;
  std::vector<int> g;

  bool is_tautology() const;
  int total_exponent() const;
  friend bool operator==(const CofactorCandidate&, const CofactorCandidate&) = default;
};

struct CofactorEnumeration {
  std::vector<CofactorCandidate> candidates;
  std::size_t total = 0;  // size before truncation
  bool truncated = false;
};

// Every (sign, f, g) with exponents <= max_exp except (+1, 0, 0). Ordered by
// sign (+1 first), total exponent, then exponents lexicographically.
CofactorEnumeration enumerate_cofactors(const FactorBasis& basis, int max_exp, std::size_t max_candidates);

// The cofactor as a reduced rational function.
RationalFunction cofactor_function(const FactorBasis& basis, const CofactorCandidate& cand, int nvars);
// Rational scale sign * prod D_j(x,0)^g_j / prod K_i(x,0)^f_i relating the
// normalized cofactor to prod K^f / prod D^g. Throws InvalidInput if a factor
// is not constant at h = 0.
Rational cofactor_scale(const FactorBasis& basis, const CofactorCandidate& cand);

struct DarbouxPair {
  MultiPoly P;  // integral, content 1 over Q[h], positive leading coefficient
  CofactorCandidate cofactor;
  RationalFunction C;
  int degree = 0;  // total degree in x
  bool reducible = false;
  std::size_t candidate_index = 0;
};

struct DarbouxOptions {
  int max_degree = 3;
  int max_exp = 2;
  std::size_t max_candidates = 10000;
  bool prune = true;
  std::uint64_t seed = 0x64617262;
};

// Basis of P of degree <= max_degree with P(phi(x)) = C(x) P(x), one pair
// per nullspace vector over Q(h), each verified exactly.
std::vector<DarbouxPair> solve_dp(const BirationalMap& map, const FactorBasis& basis, const CofactorCandidate& cand,
                                  int max_degree, std::uint64_t seed = 1);

// Coefficient matrix of the cleared identity: rows are x-monomials, columns
// the monomials of degree <= max_degree (see dp_columns).
std::vector<std::vector<UniPoly>> dp_system(const BirationalMap& map, const FactorBasis& basis,
                                            const CofactorCandidate& cand, int max_degree);
// Monomials x^m with |m| <= max_degree, ascending graded-lex.
std::vector<Monomial> dp_columns(int n, int max_degree);

struct DarbouxSearch {
  std::vector<DarbouxPair> pairs;
  std::size_t candidates = 0;
  std::size_t pruned = 0;
  std::size_t solved = 0;
  bool truncated = false;
  std::vector<std::string> notes;
};

DarbouxSearch search_all(const BirationalMap& map, const FactorBasis& basis, const DarbouxOptions& options = {});

// P(phi) D^d prod D_j^g == sign * scale * prod K_i^f D^d P with d = deg_x P,
// by full expansion.
bool verify_dp_exact(const BirationalMap& map, const FactorBasis& basis, const DarbouxPair& pair);

// P(phi(p)) == C(p) P(p) at `count` random rational points (x, h) where
// every denominator is nonzero.
bool verify_dp_at_points(const BirationalMap& map, const DarbouxPair& pair, std::uint64_t seed, int count = 5);

}  // namespace kd
