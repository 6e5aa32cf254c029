#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kd/multipoly.hpp"
#include "kd/unipoly.hpp"

namespace kd {

using PolyMatrix = std::vector<std::vector<MultiPoly>>;
using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

// Linear system whose entries are polynomials in h alone.
struct LinearSystem {
  PolyMatrix matrix;
  std::optional<std::vector<MultiPoly>> rhs;

  std::size_t rows() const { return matrix.size(); }
  std::size_t cols() const { return matrix.empty() ? 0 : matrix.front().size(); }
  // Throws InvalidInput on ragged rows or entries that involve state variables.
  void validate() const;
};

// Right nullspace over Q(h). Each basis vector has polynomial entries in h
// whose common gcd is 1 and whose integer content is 1; the first nonzero
// entry has positive leading coefficient. Empty result: trivial nullspace.
std::vector<std::vector<MultiPoly>> nullspace_over_Qh(const LinearSystem& sys, std::uint64_t seed = 1);

// Same on dense univariate entries; used by the darboux solver directly.
std::vector<std::vector<UniPoly>> nullspace_over_Qh(const std::vector<std::vector<UniPoly>>& matrix,
                                                     std::uint64_t seed = 1);

// Rank of a rational matrix.
int rank_over_Q(RationalMatrix m);

// Right nullspace over Q from the reduced row echelon form: one vector per
// free column, with that column set to 1.
std::vector<RationalVector> nullspace_over_Q(const RationalMatrix& m, std::size_t cols);

struct AffineSolution {
  RationalVector particular;
  std::vector<RationalVector> nullspace;
};

// matrix * alpha = rhs over Q. std::nullopt means infeasible.
std::optional<AffineSolution> solve_rational(const RationalMatrix& matrix, const RationalVector& rhs,
                                             std::size_t cols);

// Determinant by cofactor expansion (n <= 4) or fraction-free elimination.
MultiPoly determinant(const PolyMatrix& m, int nvars);
// adj(M) with adj(M) * M = det(M) I.
PolyMatrix adjugate(const PolyMatrix& m, int nvars);

}  // namespace kd
