#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kd/multipoly.hpp"
#include "kd/rational_function.hpp"

namespace kd {

using FactorList = std::vector<std::pair<MultiPoly, int>>;

struct FactorOptions {
  std::uint64_t seed = 0x6b64666163746f72ULL;
  int max_total_degree = 64;
  std::size_t max_terms = 20000;
  int evaluation_attempts = 12;
  int max_subset_factors = 16;
};

// p == unit * prod(factor^multiplicity); factors primitive with positive
// leading coefficient, sorted by total degree then canonical text.
struct Factorization {
  Rational unit = 1;
  FactorList factors;

  MultiPoly expand(int nvars) const;
};

// Parts are normalized, squarefree and pairwise coprime; p equals the product
// of part^multiplicity up to a rational unit. Sorted by multiplicity.
FactorList squarefree_decompose(const MultiPoly& p);

// Irreducible factorization over Q in every slot, h included. Throws
// ResourceBudgetExceeded past the configured caps.
Factorization factor_irreducible(const MultiPoly& p, const FactorOptions& options = {});

enum class Irreducibility { Irreducible, Reducible, Inconclusive };

struct IrreducibilityResult {
  Irreducibility verdict;
  std::optional<MultiPoly> witness;  // nontrivial factor when Reducible
};

IrreducibilityResult is_irreducible(const MultiPoly& p, int trials = 8, const FactorOptions& options = {});

struct FactorBasis {
  Rational unit = 1;
  FactorList numerator_factors;
  FactorList denominator_factors;

  // unit * prod K^b / prod D^m
  RationalFunction reconstruct(int nvars) const;
  std::size_t size() const { return numerator_factors.size() + denominator_factors.size(); }
};

// Factors the numerator and denominator of a reduced rational function and
// checks the reconstruction exactly.
FactorBasis factor_basis(const RationalFunction& J, const FactorOptions& options = {});

}  // namespace kd
