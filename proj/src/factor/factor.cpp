#include "kd/factor.hpp"

#include <algorithm>
#include <map>

#include "internal.hpp"
#include "kd/errors.hpp"
#include "kd/gcd.hpp"

namespace kd {

namespace {

int main_slot(const MultiPoly& p) {
  int best = -1;
  for (int s : p.support()) {
    if (best < 0 || p.degree(s) < p.degree(best)) best = s;
  }
  return best;
}

void append(std::map<int, MultiPoly>& acc, int mult, const MultiPoly& part) {
  auto it = acc.find(mult);
  if (it == acc.end()) {
    acc.emplace(mult, part);
  } else {
    it->second = it->second * part;
  }
}

// Yun's algorithm in one slot for p primitive in that slot.
void yun(const MultiPoly& p, int x, std::map<int, MultiPoly>& acc) {
  MultiPoly dp = p.derivative(x);
  MultiPoly a0 = poly_gcd(p, dp);
  MultiPoly b = p.exact_div(a0);
  MultiPoly c = dp.exact_div(a0);
  MultiPoly d = c - b.derivative(x);
  for (int i = 1; !b.is_constant(); ++i) {
    MultiPoly a = poly_gcd(b, d);
    b = b.exact_div(a);
    c = d.exact_div(a);
    d = c - b.derivative(x);
    if (!a.is_constant()) append(acc, i, a);
  }
}

void squarefree_into(const MultiPoly& p, std::map<int, MultiPoly>& acc) {
  if (p.is_constant()) return;
  const int x = main_slot(p);
  MultiPoly c = content_in(p, x);
  squarefree_into(c, acc);
  yun(p.exact_div(c), x, acc);
}

std::vector<MultiPoly> univariate_factors(const MultiPoly& q, int slot, RationalSampler& rng) {
  std::vector<MultiPoly> out;
  for (const auto& f : detail::factor_squarefree_q(UniPoly::from_multipoly(q, slot), rng)) {
    out.push_back(f.to_multipoly(q.nvars(), slot).normalized());
  }
  return out;
}

void factor_squarefree(const MultiPoly& q, RationalSampler& rng, const detail::LiftBudget& budget,
                       std::vector<MultiPoly>& out) {
  if (q.is_constant()) return;
  auto support = q.support();
  if (support.size() == 1) {
    for (auto& f : univariate_factors(q, support[0], rng)) out.push_back(std::move(f));
    return;
  }
  const int x = main_slot(q);
  MultiPoly c = content_in(q, x);
  factor_squarefree(c, rng, budget, out);
  MultiPoly pp = q.exact_div(c);
  if (pp.is_univariate_in(x)) {
    for (auto& f : univariate_factors(pp, x, rng)) out.push_back(std::move(f));
    return;
  }
  // Any slot works as main variable; fall back through the others when no
  // admissible evaluation point turns up.
  std::vector<int> order{x};
  for (int s : pp.support()) {
    if (s != x) order.push_back(s);
  }
  for (int m : order) {
    if (content_in(pp, m).total_degree() > 0) continue;
    if (auto facs = detail::factor_multivariate(pp, m, rng, budget)) {
      for (auto& f : *facs) out.push_back(std::move(f));
      return;
    }
  }
  throw ResourceBudgetExceeded("no admissible evaluation point for factorization", "factor");
}

void sort_factors(FactorList& list) {
  std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
    if (a.first.total_degree() != b.first.total_degree()) return a.first.total_degree() < b.first.total_degree();
    return a.first.to_string() < b.first.to_string();
  });
}

}  // namespace

MultiPoly Factorization::expand(int nvars) const {
  MultiPoly prod = MultiPoly::constant(nvars, unit);
  for (const auto& [f, m] : factors) prod = prod * f.pow(m);
  return prod;
}

FactorList squarefree_decompose(const MultiPoly& p) {
  if (p.is_zero()) throw InvalidInput("squarefree decomposition of zero");
  std::map<int, MultiPoly> acc;
  squarefree_into(p.rational_content().second, acc);
  FactorList out;
  for (auto& [m, part] : acc) out.emplace_back(part.normalized(), m);
  return out;
}

Factorization factor_irreducible(const MultiPoly& p, const FactorOptions& options) {
  if (p.is_zero()) throw InvalidInput("factorization of zero");
  if (p.total_degree() > options.max_total_degree) {
    throw ResourceBudgetExceeded("total degree " + std::to_string(p.total_degree()) + " exceeds factorization cap " +
                                     std::to_string(options.max_total_degree),
                                 "factor");
  }
  if (p.size() > options.max_terms) throw ResourceBudgetExceeded("too many terms to factor", "factor");
  RationalSampler rng(options.seed);
  detail::LiftBudget budget{options.max_terms, options.max_subset_factors, options.evaluation_attempts};

  Factorization result;
  for (const auto& [part, mult] : squarefree_decompose(p)) {
    std::vector<MultiPoly> facs;
    factor_squarefree(part, rng, budget, facs);
    for (auto& f : facs) result.factors.emplace_back(std::move(f), mult);
  }
  sort_factors(result.factors);
  MultiPoly prod = MultiPoly::constant(p.nvars(), 1);
  for (const auto& [f, m] : result.factors) prod = prod * f.pow(m);
  result.unit = p.leading_coefficient() / prod.leading_coefficient();
  if (prod * result.unit != p) throw Error("factorization failed the reconstruction check", "factor");
  return result;
}

IrreducibilityResult is_irreducible(const MultiPoly& p, int trials, const FactorOptions& options) {
  if (p.is_constant()) throw InvalidInput("irreducibility of a constant");
  MultiPoly q = p.normalized();
  if (q.total_degree() == 1) return {Irreducibility::Irreducible, std::nullopt};
  const auto support = q.support();
  for (int s : support) {
    MultiPoly c = content_in(q, s);
    if (!c.is_constant()) return {Irreducibility::Reducible, c};
  }
  auto parts = squarefree_decompose(q);
  if (parts.size() > 1 || parts[0].second > 1) return {Irreducibility::Reducible, parts[0].first};

  RationalSampler rng(options.seed);
  if (support.size() == 1) {
    auto facs = univariate_factors(q, support[0], rng);
    if (facs.size() == 1) return {Irreducibility::Irreducible, std::nullopt};
    return {Irreducibility::Reducible, facs[0]};
  }
  // q is primitive in every slot, so a degree-preserving irreducible image
  // in any slot proves irreducibility.
  bool any_valid = false;
  for (int t = 0; t < trials; ++t) {
    const int slot = support[t % support.size()];
    auto r = detail::admissible_restriction(q, slot, rng, 1);
    if (!r) continue;
    any_valid = true;
    if (detail::factor_squarefree_q(r->image, rng).size() == 1) return {Irreducibility::Irreducible, std::nullopt};
  }
  if (!any_valid) return {Irreducibility::Inconclusive, std::nullopt};
  auto full = factor_irreducible(q, options);
  if (full.factors.size() > 1) return {Irreducibility::Reducible, full.factors[0].first};
  return {Irreducibility::Irreducible, std::nullopt};
}

RationalFunction FactorBasis::reconstruct(int nvars) const {
  MultiPoly num = MultiPoly::constant(nvars, unit);
  for (const auto& [f, m] : numerator_factors) num = num * f.pow(m);
  MultiPoly den = MultiPoly::constant(nvars, 1);
  for (const auto& [f, m] : denominator_factors) den = den * f.pow(m);
  return RationalFunction(num, den);
}

FactorBasis factor_basis(const RationalFunction& J, const FactorOptions& options) {
  FactorBasis basis;
  const int nv = J.nvars();
  Factorization num = factor_irreducible(J.num(), options);
  Factorization den = factor_irreducible(J.den(), options);
  basis.unit = num.unit / den.unit;
  basis.numerator_factors = std::move(num.factors);
  basis.denominator_factors = std::move(den.factors);
  RationalFunction back = basis.reconstruct(nv);
  if (back.num() != J.num() || back.den() != J.den()) {
    throw Error("factor basis does not reproduce the Jacobian", "factor");
  }
  return basis;
}

}  // namespace kd
