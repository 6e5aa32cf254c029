#include "kd/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "kd/errors.hpp"
#include "kd/linear_algebra.hpp"

namespace kd {

namespace {

using Vec = std::vector<Rational>;

Vec primitive_integer(const Vec& v) {
  Integer l = lcm_of_denominators(v);
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * l;
  Integer g = gcd_of_numerators(out);
  if (g == 0) return out;
  for (const auto& x : out) {
    if (x != 0) {
      if (x < 0) g = -g;
      break;
    }
  }
  for (auto& x : out) x /= g;
  return out;
}

Rational l1(const Vec& v) {
  Rational s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

Rational linf(const Vec& v) {
  Rational s = 0;
  for (const auto& x : v) s = std::max(s, Rational(abs(x)));
  return s;
}

bool is_integral(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_integer(x); });
}

// Minimal Euclidean norm element of p + span(B).
Vec min_norm(const Vec& p, const std::vector<Vec>& B) {
  if (B.empty()) return p;
  const std::size_t k = B.size();
  RationalMatrix gram(k, RationalVector(k));
  RationalVector rhs(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t i = 0; i < p.size(); ++i) gram[a][b] += B[a][i] * B[b][i];
    }
    for (std::size_t i = 0; i < p.size(); ++i) rhs[a] += B[a][i] * p[i];
  }
  auto sol = solve_rational(gram, rhs, k);
  Vec out = p;
  if (!sol) return out;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t i = 0; i < p.size(); ++i) out[i] -= sol->particular[a] * B[a][i];
  }
  return out;
}

ProductForm product_of(const std::vector<MultiPoly>& polys, const Vec& alpha) {
  ProductForm pf;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    pf.factors.push_back(polys[i]);
    pf.exponents.push_back(alpha[i]);
  }
  return pf;
}

RationalFunction scalar(int nvars, const Rational& c) { return RationalFunction(MultiPoly::constant(nvars, c)); }

std::string factor_text(const MultiPoly& f, const Rational& e, std::span<const std::string> names) {
  std::string s = "(" + f.to_string(names) + ")";
  if (e != 1) s += "^" + (is_integer(e) ? e.get_str() : "(" + e.get_str() + ")");
  return s;
}

}  // namespace

std::string kind_name(CombinationKind k) {
  switch (k) {
    case CombinationKind::FirstIntegral:
      return "first_integral";
    case CombinationKind::Exponential:
      return "exponential";
    case CombinationKind::Measure:
      return "measure";
  }
  return "unknown";
}

MultiPoly kappa(const MultiPoly& factor) {
  const int h = factor.h_slot();
  MultiPoly at0 = factor.partial_eval(h, 0);
  if (!at0.is_constant() || at0.is_zero()) throw InvalidInput("factor is not a nonzero constant at h = 0");
  auto coeffs = factor.coefficients_in(h);
  if (coeffs.size() < 2) return MultiPoly(factor.nvars());
  return coeffs[1].divide_by(at0.constant_term());
}

bool continuum_identity_holds(const ContinuumPair& cp, const QuadraticOde& ode) {
  const int n = ode.dimension();
  auto f = rhs(ode);
  MultiPoly lhs(n);
  for (int i = 0; i < n; ++i) lhs += cp.Pbar.derivative(i) * f[i];
  return lhs * cp.Cbar.den() == cp.Cbar.num() * cp.Pbar;
}

ContinuumPair continuum_limit(const DarbouxPair& pair, const FactorBasis& basis, const QuadraticOde& ode) {
  if (pair.cofactor.sign < 0) {
    throw NoContinuumLimit("cofactor tends to -1 as h -> 0; (C - 1)/h has no limit", "structure");
  }
  const int n = ode.dimension();
  ContinuumPair cp;
  for (auto& c : pair.P.coefficients_in(n)) {
    if (!c.is_zero()) {
      cp.Pbar = c;
      break;
    }
  }
  MultiPoly cbar(n);
  for (std::size_t i = 0; i < pair.cofactor.f.size(); ++i) {
    if (pair.cofactor.f[i]) cbar += kappa(basis.numerator_factors[i].first) * Rational(pair.cofactor.f[i]);
  }
  for (std::size_t j = 0; j < pair.cofactor.g.size(); ++j) {
    if (pair.cofactor.g[j]) cbar -= kappa(basis.denominator_factors[j].first) * Rational(pair.cofactor.g[j]);
  }
  cp.Cbar = RationalFunction(cbar);
  if (!continuum_identity_holds(cp, ode)) {
    throw LimitInconsistent("continuum limit of " + pair.P.to_string() + " fails grad(P).f = C P", "structure");
  }
  return cp;
}

RationalFunction ProductForm::to_rational_function(int nvars) const {
  MultiPoly num = MultiPoly::constant(nvars, 1), den = MultiPoly::constant(nvars, 1);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!is_integer(exponents[i])) throw InvalidInput("product form has a non-integer exponent");
    long e = exponents[i].get_num().get_si();
    if (e > 0) num = num * factors[i].pow(static_cast<int>(e));
    if (e < 0) den = den * factors[i].pow(static_cast<int>(-e));
  }
  return RationalFunction(num, den);
}

std::optional<Rational> ProductForm::eval(std::span<const Rational> point) const {
  Rational acc = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!is_integer(exponents[i])) return std::nullopt;
    Rational v = factors[i].eval(point);
    long e = exponents[i].get_num().get_si();
    if (v == 0 && e < 0) return std::nullopt;
    Rational p = 1;
    for (long k = 0; k < std::labs(e); ++k) p *= v;
    if (e < 0) {
      acc /= p;
    } else {
      acc *= p;
    }
  }
  return acc;
}

double ProductForm::eval_double(std::span<const double> point) const {
  double acc = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) acc *= std::pow(factors[i].eval_double(point), exponents[i].get_d());
  return acc;
}

long double ProductForm::eval_long_double(std::span<const long double> point) const {
  long double acc = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    acc *= std::pow(factors[i].eval_long_double(point), static_cast<long double>(exponents[i].get_d()));
  }
  return acc;
}

std::string ProductForm::to_string(std::span<const std::string> names) const {
  std::string num, den;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (exponents[i] > 0) {
      if (!num.empty()) num += "*";
      num += factor_text(factors[i], exponents[i], names);
    } else if (exponents[i] < 0) {
      if (!den.empty()) den += "*";
      den += factor_text(factors[i], -exponents[i], names);
    }
  }
  if (num.empty()) num = "1";
  if (den.empty()) return num;
  return num + " / " + (den.find(")*(") != std::string::npos || den.find('^') != std::string::npos ? "(" + den + ")" : den);
}

RationalFunction combined_cofactor(const std::vector<ContinuumPair>& pairs, const std::vector<Rational>& alpha) {
  const int n = pairs.empty() ? 0 : pairs.front().Pbar.nvars();
  RationalFunction sum{MultiPoly(n)};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (alpha[i] != 0) sum = sum + scalar(n, alpha[i]) * pairs[i].Cbar;
  }
  return sum;
}

bool first_integral_certificate(const ProductForm& I, const QuadraticOde& ode) {
  const int n = ode.dimension();
  auto f = rhs(ode);
  RationalFunction R = I.to_rational_function(n);
  RationalFunction total{MultiPoly(n)};
  for (int i = 0; i < n; ++i) total = total + R.derivative(i) * RationalFunction(f[i]);
  return total.is_zero();
}

bool product_rule_holds(const std::vector<ContinuumPair>& pairs, const std::vector<Rational>& alpha,
                        const QuadraticOde& ode, std::uint64_t seed, int count) {
  const int n = ode.dimension();
  auto f = rhs(ode);
  RationalFunction C = combined_cofactor(pairs, alpha);
  RationalSampler rng(seed);
  int done = 0;
  for (int attempt = 0; done < count && attempt < 50 * count; ++attempt) {
    std::vector<Rational> pt(n + 1);
    for (int i = 0; i < n; ++i) pt[i] = rng.next_rational(17, 9);
    if (C.den().eval(pt) == 0) continue;
    Rational lhs = 0;
    bool singular = false;
    for (std::size_t k = 0; k < pairs.size() && !singular; ++k) {
      if (alpha[k] == 0) continue;
      Rational pv = pairs[k].Pbar.eval(pt);
      if (pv == 0) {
        singular = true;
        break;
      }
      Rational flow = 0;
      for (int i = 0; i < n; ++i) flow += pairs[k].Pbar.derivative(i).eval(pt) * f[i].eval(pt);
      lhs += alpha[k] * flow / pv;
    }
    if (singular) continue;
    if (lhs != C.eval(pt)) return false;
    ++done;
  }
  return done == count;
}

namespace {

// Distinct primitive integer vectors sum c_j b_j with |c_j| <= span, sorted
// by (L1, Linf, descending lexicographic).
std::vector<Vec> lattice_candidates(const std::vector<Vec>& ints, int span) {
  const std::size_t k = ints.size();
  std::vector<Vec> cands;
  std::vector<int> c(k, -span);
  for (;;) {
    Vec v(ints[0].size());
    bool nonzero = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (c[j] == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += ints[j][i] * c[j];
    }
    for (const auto& x : v) nonzero = nonzero || x != 0;
    if (nonzero) {
      v = primitive_integer(v);
      if (std::find(cands.begin(), cands.end(), v) == cands.end()) cands.push_back(v);
    }
    std::size_t p = 0;
    while (p < k && c[p] == span) c[p++] = -span;
    if (p == k) break;
    ++c[p];
  }
  std::sort(cands.begin(), cands.end(), [](const Vec& a, const Vec& b) {
    if (l1(a) != l1(b)) return l1(a) < l1(b);
    if (linf(a) != linf(b)) return linf(a) < linf(b);
    return b < a;
  });
  return cands;
}

}  // namespace

std::vector<std::vector<Rational>> small_integer_basis(const std::vector<std::vector<Rational>>& basis) {
  const std::size_t k = basis.size();
  if (k == 0) return {};
  std::vector<Vec> ints;
  for (const auto& b : basis) ints.push_back(primitive_integer(b));
  if (k > 6) return ints;
  std::vector<Vec> chosen;
  for (const auto& v : lattice_candidates(ints, k <= 4 ? 2 : 1)) {
    auto trial = chosen;
    trial.push_back(v);
    if (rank_over_Q(trial) == static_cast<int>(trial.size())) chosen = std::move(trial);
    if (chosen.size() == k) break;
  }
  return chosen;
}

std::vector<std::vector<Rational>> small_lattice_vectors(const std::vector<std::vector<Rational>>& basis) {
  const std::size_t k = basis.size();
  if (k == 0 || k > 4) return {};
  std::vector<Vec> ints;
  Rational bound = 0;
  for (const auto& b : basis) {
    ints.push_back(primitive_integer(b));
    bound = std::max(bound, l1(ints.back()));
  }
  std::vector<Vec> out;
  for (auto& v : lattice_candidates(ints, 2)) {
    if (l1(v) <= bound) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Combination> find_combinations(const std::vector<ContinuumPair>& pairs, const QuadraticOde& ode) {
  std::vector<Combination> out;
  const std::size_t m = pairs.size();
  if (m == 0) return out;
  const int n = ode.dimension();
  std::vector<MultiPoly> pbar;
  for (const auto& p : pairs) {
    if (!p.Cbar.is_polynomial()) throw InvalidInput("continuum cofactor is not a polynomial");
    pbar.push_back(p.Pbar);
  }
  const MultiPoly div = divergence(ode);

  // Rows indexed by monomials of the cofactors and of div f.
  std::map<Monomial, std::size_t> row_of;
  auto note = [&](const MultiPoly& p) {
    for (const auto& t : p.terms()) row_of.emplace(t.mono, 0);
  };
  for (const auto& p : pairs) note(p.Cbar.num());
  note(div);
  note(MultiPoly::constant(n, 1));
  std::size_t r = 0;
  for (auto& [mono, idx] : row_of) idx = r++;
  const std::size_t const_row = row_of.at(Monomial{});

  RationalMatrix full(row_of.size(), RationalVector(m));
  for (std::size_t i = 0; i < m; ++i) {
    const Rational dc = pairs[i].Cbar.den().constant_term();
    for (const auto& t : pairs[i].Cbar.num().terms()) full[row_of.at(t.mono)][i] = t.coef / dc;
  }
  RationalMatrix nonconst;
  for (std::size_t row = 0; row < full.size(); ++row) {
    if (row != const_row) nonconst.push_back(full[row]);
  }
  if (nonconst.empty()) nonconst.push_back(RationalVector(m));
  const RationalVector consts = full[const_row];
  auto rate_of = [&](const Vec& a) {
    Rational s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a[i] * consts[i];
    return s;
  };
  auto in_exp_space = [&](const Vec& a) {
    for (const auto& row : nonconst) {
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i) s += row[i] * a[i];
      if (s != 0) return false;
    }
    return true;
  };

  // First integrals.
  auto fi_space = nullspace_over_Q(full, m);
  auto fi_basis = small_integer_basis(fi_space);
  for (const auto& a : fi_basis) {
    Combination c;
    c.kind = CombinationKind::FirstIntegral;
    c.alpha = a;
    c.expression = product_of(pbar, a);
    c.verified = combined_cofactor(pairs, a).is_zero() && first_integral_certificate(c.expression, ode) &&
                 product_rule_holds(pairs, a, ode, 0x6669 + out.size());
    out.push_back(std::move(c));
  }

  // Exponential relations: single constant cofactors, pairwise ratios,
  // then fill up the space.
  auto exp_space = nullspace_over_Q(nonconst, m);
  const std::size_t want = exp_space.size() - fi_space.size();
  std::vector<Vec> exps;
  auto add_exp = [&](Vec a) {
    Rational rate = rate_of(a);
    if (rate == 0 || !in_exp_space(a)) return;
    if (rate < 0) {
      for (auto& x : a) x = -x;
    }
    if (std::find(exps.begin(), exps.end(), a) == exps.end()) exps.push_back(std::move(a));
  };
  for (std::size_t i = 0; i < m; ++i) {
    Vec a(m);
    a[i] = 1;
    add_exp(a);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      Vec a(m);
      a[i] = 1;
      a[j] = -1;
      add_exp(a);
    }
  }
  auto span_rank = [&](const std::vector<Vec>& extra) {
    std::vector<Vec> all = fi_basis;
    all.insert(all.end(), extra.begin(), extra.end());
    return all.empty() ? 0 : rank_over_Q(all);
  };
  if (static_cast<std::size_t>(span_rank(exps)) < fi_basis.size() + want) {
    for (const auto& a : small_integer_basis(exp_space)) {
      auto trial = exps;
      trial.push_back(a);
      if (span_rank(trial) > span_rank(exps)) add_exp(a);
    }
  }
  for (const auto& a : exps) {
    Combination c;
    c.kind = CombinationKind::Exponential;
    c.alpha = a;
    c.rate = rate_of(a);
    c.expression = product_of(pbar, a);
    RationalFunction sum = combined_cofactor(pairs, a);
    c.verified = sum.is_polynomial() && sum.num().is_constant() && sum == scalar(n, c.rate) &&
                 product_rule_holds(pairs, a, ode, 0x6578 + out.size());
    out.push_back(std::move(c));
  }

  // Measure: sum alpha_i Cbar_i = div f, minimal-norm representative.
  RationalVector target(full.size());
  for (const auto& t : div.terms()) target[row_of.at(t.mono)] = t.coef;
  if (auto sol = solve_rational(full, target, m)) {
    Vec a = min_norm(sol->particular, sol->nullspace);
    Combination c;
    c.kind = CombinationKind::Measure;
    c.alpha = a;
    c.expression = product_of(pbar, a);
    c.verified = combined_cofactor(pairs, a) == RationalFunction(div);
    if (is_integral(a)) c.verified = c.verified && product_rule_holds(pairs, a, ode, 0x6d65);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Combination> find_discrete_combinations(const std::vector<DarbouxPair>& pairs, const FactorBasis& basis,
                                                    const JacobianData& J) {
  std::vector<Combination> out;
  const std::size_t m = pairs.size();
  if (m == 0) return out;
  const std::size_t nf = basis.numerator_factors.size();
  const std::size_t ng = basis.denominator_factors.size();
  const int nv = J.J.nvars();
  RationalMatrix mat(nf + ng, RationalVector(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t a = 0; a < nf; ++a) mat[a][i] = pairs[i].cofactor.f[a];
    for (std::size_t b = 0; b < ng; ++b) mat[nf + b][i] = -pairs[i].cofactor.g[b];
  }
  std::vector<MultiPoly> polys;
  for (const auto& p : pairs) polys.push_back(p.P);
  auto product_of_cofactors = [&](const Vec& a) {
    RationalFunction acc(MultiPoly::constant(nv, 1));
    for (std::size_t i = 0; i < m; ++i) {
      if (a[i] != 0) acc = acc * pairs[i].C.pow(static_cast<int>(a[i].get_num().get_si()));
    }
    return acc;
  };

  const RationalFunction one(MultiPoly::constant(nv, 1));
  auto space = mat.empty() ? std::vector<RationalVector>{} : nullspace_over_Q(mat, m);
  for (const auto& a : small_integer_basis(space)) {
    int sign = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (pairs[i].cofactor.sign < 0 && a[i].get_num() % 2 != 0) sign = -sign;
    }
    if (sign < 0) continue;
    Combination c;
    c.kind = CombinationKind::FirstIntegral;
    c.level = CombinationLevel::Discrete;
    c.alpha = a;
    c.expression = product_of(polys, a);
    c.verified = product_of_cofactors(a) == one;
    out.push_back(std::move(c));
  }

  RationalVector target(nf + ng);
  for (std::size_t a = 0; a < nf; ++a) target[a] = basis.numerator_factors[a].second;
  for (std::size_t b = 0; b < ng; ++b) target[nf + b] = -basis.denominator_factors[b].second;
  if (auto sol = solve_rational(mat, target, m)) {
    Vec a = min_norm(sol->particular, sol->nullspace);
    if (is_integral(a)) {
      Combination c;
      c.kind = CombinationKind::Measure;
      c.level = CombinationLevel::Discrete;
      c.alpha = a;
      c.expression = product_of(polys, a);
      c.verified = product_of_cofactors(a) == J.J;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Rational> ClosedFormSolution::constants_for(std::span<const Rational> x0) const {
  std::vector<Rational> pt(x0.begin(), x0.end());
  pt.push_back(0);
  std::vector<Rational> k;
  for (const auto& r : relations) k.push_back(r.numerator.eval(pt) / r.denominator.eval(pt));
  return k;
}

std::vector<double> ClosedFormSolution::constants_for(std::span<const double> x0) const {
  std::vector<double> pt(x0.begin(), x0.end());
  pt.push_back(0);
  std::vector<double> k;
  for (const auto& r : relations) k.push_back(r.numerator.eval_double(pt) / r.denominator.eval_double(pt));
  return k;
}

std::vector<double> ClosedFormSolution::eval(std::span<const double> k, double t) const {
  std::vector<double> sym(2 * relations.size());
  for (std::size_t m = 0; m < relations.size(); ++m) {
    sym[2 * m] = k[m];
    sym[2 * m + 1] = std::exp(relations[m].rate.get_d() * t);
  }
  std::vector<double> out;
  for (const auto& xi : x) out.push_back(xi.num().eval_double(sym) / xi.den().eval_double(sym));
  return out;
}

std::vector<long double> ClosedFormSolution::eval(std::span<const long double> k, long double t) const {
  std::vector<long double> sym(2 * relations.size());
  for (std::size_t m = 0; m < relations.size(); ++m) {
    sym[2 * m] = k[m];
    sym[2 * m + 1] = std::exp(static_cast<long double>(relations[m].rate.get_d()) * t);
  }
  std::vector<long double> out;
  for (const auto& xi : x) out.push_back(xi.num().eval_long_double(sym) / xi.den().eval_long_double(sym));
  return out;
}

std::vector<double> ClosedFormSolution::time_derivative(std::span<const double> k, double t) const {
  std::vector<double> sym(2 * relations.size());
  for (std::size_t m = 0; m < relations.size(); ++m) {
    sym[2 * m] = k[m];
    sym[2 * m + 1] = std::exp(relations[m].rate.get_d() * t);
  }
  std::vector<double> out;
  for (const auto& xi : x) {
    // d/dt (N/D) = sum_m c_m E_m (N_E D - N D_E) / D^2.
    const double N = xi.num().eval_double(sym);
    const double D = xi.den().eval_double(sym);
    double acc = 0;
    for (std::size_t m = 0; m < relations.size(); ++m) {
      const int slot = static_cast<int>(2 * m + 1);
      const double dN = xi.num().derivative(slot).eval_double(sym);
      const double dD = xi.den().derivative(slot).eval_double(sym);
      acc += relations[m].rate.get_d() * sym[slot] * (dN * D - N * dD) / (D * D);
    }
    out.push_back(acc);
  }
  return out;
}

SynthesisResult synthesize_solution(const std::vector<Combination>& exponentials,
                                    const std::vector<ContinuumPair>& pairs, const QuadraticOde& ode) {
  const int n = ode.dimension();
  SynthesisResult result;

  std::vector<std::pair<Rational, ClosedFormSolution::Relation>> cands;
  for (const auto& c : exponentials) {
    if (c.kind != CombinationKind::Exponential || c.level != CombinationLevel::Continuum) continue;
    int plus = -1, minus = -1, others = 0;
    for (std::size_t i = 0; i < c.alpha.size(); ++i) {
      if (c.alpha[i] == 1 && plus < 0) {
        plus = static_cast<int>(i);
      } else if (c.alpha[i] == -1 && minus < 0) {
        minus = static_cast<int>(i);
      } else if (c.alpha[i] != 0) {
        ++others;
      }
    }
    ClosedFormSolution::Relation rel{c.alpha, c.rate, MultiPoly(), MultiPoly()};
    if (others > 0) continue;
    if (plus < 0 && minus >= 0) {
      // P^-1 = k e^{ct} is P = k' e^{-ct}.
      rel.alpha[minus] = 1;
      rel.rate = -c.rate;
      plus = minus;
      minus = -1;
    }
    if (plus < 0) continue;
    rel.numerator = pairs[plus].Pbar;
    rel.denominator = minus >= 0 ? pairs[minus].Pbar : MultiPoly::constant(pairs[plus].Pbar.nvars(), 1);
    if (rel.numerator.state_degree() != 1 || rel.denominator.state_degree() > 1) continue;
    cands.emplace_back(l1(rel.alpha), std::move(rel));
  }
  std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(cands.size()) < n) {
    result.reason = "fewer than n affine exponential relations";
    return result;
  }

  const int sym_nvars = 2 * n - 1;  // 2n symbol slots, the last is the h slot
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const int total = static_cast<int>(cands.size());
  int tried = 0;
  for (;;) {
    PolyMatrix M(n);
    std::vector<MultiPoly> rhs_col;
    for (int r = 0; r < n; ++r) {
      const auto& rel = cands[idx[r]].second;
      const MultiPoly kE = MultiPoly::variable(sym_nvars, 2 * r) * MultiPoly::variable(sym_nvars, 2 * r + 1);
      for (int i = 0; i < n; ++i) {
        Monomial xi = Monomial::unit(i);
        M[r].push_back(MultiPoly::constant(sym_nvars, rel.numerator.coefficient(xi)) -
                       kE * rel.denominator.coefficient(xi));
      }
      rhs_col.push_back(kE * rel.denominator.constant_term() -
                        MultiPoly::constant(sym_nvars, rel.numerator.constant_term()));
    }
    MultiPoly det = determinant(M, sym_nvars);
    if (!det.is_zero()) {
      ClosedFormSolution sol;
      sol.symbol_nvars = sym_nvars;
      for (int r = 0; r < n; ++r) {
        sol.relations.push_back(cands[idx[r]].second);
        sol.symbol_names.push_back("k" + std::to_string(r + 1));
        sol.symbol_names.push_back("E" + std::to_string(r + 1));
      }
      for (int i = 0; i < n; ++i) {
        PolyMatrix Mi = M;
        for (int r = 0; r < n; ++r) Mi[r][i] = rhs_col[r];
        sol.x.emplace_back(determinant(Mi, sym_nvars), det);
      }
      result.solution = std::move(sol);
      return result;
    }
    if (++tried > 5000) break;
    int p = n - 1;
    while (p >= 0 && idx[p] == total - n + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < n; ++q) idx[q] = idx[q - 1] + 1;
  }
  result.reason = "no subset of affine exponential relations determines x";
  return result;
}

}  // namespace kd
