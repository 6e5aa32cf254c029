#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kd/darboux.hpp"
#include "kd/ode.hpp"

namespace kd {

// Pbar = P(x, 0) and Cbar = lim (C - 1) / h, with grad(Pbar) . f = Cbar Pbar.
struct ContinuumPair {
  MultiPoly Pbar;
  RationalFunction Cbar;
  std::size_t source = 0;  // index into the DarbouxPair list
};

// h-coefficient of F / F(x, 0).
MultiPoly kappa(const MultiPoly& factor);

// Throws NoContinuumLimit for sign -1 and LimitInconsistent when the
// continuum identity fails.
ContinuumPair continuum_limit(const DarbouxPair& pair, const FactorBasis& basis, const QuadraticOde& ode);

// grad(Pbar) . f == Cbar Pbar, expanded exactly.
bool continuum_identity_holds(const ContinuumPair& cp, const QuadraticOde& ode);

// prod factors[i]^exponents[i]
struct ProductForm {
  std::vector<MultiPoly> factors;
  std::vector<Rational> exponents;

  // Only for integer exponents.
  RationalFunction to_rational_function(int nvars) const;
  std::optional<Rational> eval(std::span<const Rational> point) const;
  double eval_double(std::span<const double> point) const;
  long double eval_long_double(std::span<const long double> point) const;
  // Numerator over denominator in canonical text, e.g. "(y)^2 / ((x + 1)*(z))".
  std::string to_string(std::span<const std::string> names) const;
};

enum class CombinationKind { FirstIntegral, Exponential, Measure };
enum class CombinationLevel { Continuum, Discrete };

struct Combination {
  CombinationKind kind = CombinationKind::FirstIntegral;
  CombinationLevel level = CombinationLevel::Continuum;
  std::vector<Rational> alpha;  // over the pair list the search was given
  Rational rate = 0;            // Exponential only
  ProductForm expression;
  bool verified = false;
};

std::string kind_name(CombinationKind k);

// Continuum first integrals, exponential relations and measures. Exponents
// are small coprime integers (measures may be rational).
std::vector<Combination> find_combinations(const std::vector<ContinuumPair>& pairs, const QuadraticOde& ode);

// sum alpha_i Cbar_i as a rational function.
RationalFunction combined_cofactor(const std::vector<ContinuumPair>& pairs, const std::vector<Rational>& alpha);

// grad(I) . f == 0 for I = prod Pbar^alpha, by clearing denominators.
bool first_integral_certificate(const ProductForm& I, const QuadraticOde& ode);

// At random rational points: sum alpha_i (grad Pbar_i . f) / Pbar_i == sum alpha_i Cbar_i.
bool product_rule_holds(const std::vector<ContinuumPair>& pairs, const std::vector<Rational>& alpha,
                        const QuadraticOde& ode, std::uint64_t seed, int count = 5);

// Multiplicative relations among discrete cofactors: prod C_i^alpha_i = 1
// (integral of the map) or = J (preserved measure of the map).
std::vector<Combination> find_discrete_combinations(const std::vector<DarbouxPair>& pairs, const FactorBasis& basis,
                                                    const JacobianData& J);

// Coprime integer vectors spanning the same rational space, preferring
// small entries.
std::vector<std::vector<Rational>> small_integer_basis(const std::vector<std::vector<Rational>>& basis);
// Every primitive vector of the span with small coefficients over the basis
// and L1 norm at most the largest basis norm, in the same preference order.
std::vector<std::vector<Rational>> small_lattice_vectors(const std::vector<std::vector<Rational>>& basis);

// x_i(t) as rational functions of symbols k_m, E_m = exp(c_m t).
struct ClosedFormSolution {
  struct Relation {
    std::vector<Rational> alpha;
    Rational rate;
    MultiPoly numerator;    // affine in x
    MultiPoly denominator;  // affine in x, or 1
  };
  std::vector<Relation> relations;
  // Symbol ring: slots 2m and 2m+1 hold k_m and E_m.
  int symbol_nvars = 0;
  std::vector<std::string> symbol_names;
  std::vector<RationalFunction> x;

  // k_m = numerator_m(x0) / denominator_m(x0).
  std::vector<Rational> constants_for(std::span<const Rational> x0) const;
  std::vector<double> constants_for(std::span<const double> x0) const;
  // x(t) for given k.
  std::vector<double> eval(std::span<const double> k, double t) const;
  std::vector<long double> eval(std::span<const long double> k, long double t) const;
  // dx/dt with E_m' = c_m E_m.
  std::vector<double> time_derivative(std::span<const double> k, double t) const;
};

struct SynthesisResult {
  std::optional<ClosedFormSolution> solution;
  std::string reason;  // set when not applicable
};

SynthesisResult synthesize_solution(const std::vector<Combination>& exponentials,
                                    const std::vector<ContinuumPair>& pairs, const QuadraticOde& ode);

}  // namespace kd
