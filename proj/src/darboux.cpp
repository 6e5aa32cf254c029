#include "kd/darboux.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "kd/errors.hpp"
#include "kd/linear_algebra.hpp"

namespace kd {

namespace {

constexpr std::uint64_t kPrime = (1ULL << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::optional<std::uint64_t> to_modp(const Rational& q) {
  std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (den == 0) return std::nullopt;
  std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
  return mulmod(num, powmod(den, kPrime - 2));
}

int rank_modp(std::vector<std::vector<std::uint64_t>> m, std::size_t cols) {
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    const std::uint64_t inv = powmod(m[rank][c], kPrime - 2);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const std::uint64_t f = mulmod(m[r][c], inv);
      for (std::size_t k = c; k < cols; ++k) {
        m[r][k] = (m[r][k] + kPrime - mulmod(f, m[rank][k])) % kPrime;
      }
    }
    ++rank;
  }
  return rank;
}

// Fhat = F / F(x, 0) for every basis factor.
struct NormalizedBasis {
  std::vector<MultiPoly> K;
  std::vector<MultiPoly> D;
};

MultiPoly h_normalized(const MultiPoly& f, int h_slot) {
  MultiPoly at0 = f.partial_eval(h_slot, 0);
  if (!at0.is_constant() || at0.is_zero()) {
    throw InvalidInput("factor " + f.to_string() + " is not a nonzero constant at h = 0");
  }
  return f.divide_by(at0.constant_term());
}

NormalizedBasis normalize(const FactorBasis& basis, int nvars) {
  NormalizedBasis nb;
  for (const auto& [f, m] : basis.numerator_factors) nb.K.push_back(h_normalized(f, nvars));
  for (const auto& [f, m] : basis.denominator_factors) nb.D.push_back(h_normalized(f, nvars));
  return nb;
}

MultiPoly product(const std::vector<MultiPoly>& factors, const std::vector<int>& exps, int nvars) {
  MultiPoly p = MultiPoly::constant(nvars, 1);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (exps[i] > 0) p = p * factors[i].pow(exps[i]);
  }
  return p;
}

void monomials_rec(int n, int slot, int remaining, std::vector<int>& exps, std::vector<Monomial>& out) {
  if (slot == n) {
    out.emplace_back(std::span<const int>(exps));
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    exps[slot] = e;
    monomials_rec(n, slot + 1, remaining - e, exps, out);
  }
  exps[slot] = 0;
}

// Polynomial pieces of the cleared identity shared by all candidates:
// A_m = N^m D^(d-|m|) and B_m = D^d x^m.
class ClearedForm {
 public:
  ClearedForm(const BirationalMap& map, int d) : map_(map), d_(d), columns_(dp_columns(map.n, d)) {}

  const std::vector<Monomial>& columns() const { return columns_; }

  const std::vector<MultiPoly>& A() {
    if (A_.empty()) {
      const int n = map_.n;
      std::vector<std::vector<MultiPoly>> npow(n), dpow;
      for (int i = 0; i < n; ++i) {
        npow[i].push_back(MultiPoly::constant(n, 1));
        for (int k = 1; k <= d_; ++k) npow[i].push_back(npow[i].back() * map_.numerators[i]);
      }
      std::vector<MultiPoly> dp{MultiPoly::constant(n, 1)};
      for (int k = 1; k <= d_; ++k) dp.push_back(dp.back() * map_.common_den);
      for (const auto& m : columns_) {
        MultiPoly a = dp[d_ - m.degree()];
        for (int i = 0; i < n; ++i) {
          if (m[i] > 0) a = a * npow[i][m[i]];
        }
        A_.push_back(std::move(a));
      }
      Dd_ = dp[d_];
    }
    return A_;
  }
  const MultiPoly& Dd() {
    A();
    return Dd_;
  }

 private:
  const BirationalMap& map_;
  int d_;
  std::vector<Monomial> columns_;
  std::vector<MultiPoly> A_;
  MultiPoly Dd_;
};

// Values of the cleared identity's ingredients at random points (x, h0),
// reduced modulo a 61-bit prime.
class Probe {
 public:
  Probe(const BirationalMap& map, const NormalizedBasis& nb, int d, RationalSampler& rng) {
    const int n = map.n;
    columns_ = dp_columns(n, d);
    const std::size_t want = columns_.size() + 12;
    Rational h0 = rng.next_rational(97, 13);
    if (h0 == 0) h0 = Rational(2, 7);
    for (int attempt = 0; points_.size() < want && attempt < static_cast<int>(want) * 20; ++attempt) {
      std::vector<Rational> pt(n + 1);
      for (int i = 0; i < n; ++i) pt[i] = rng.next_rational(19, 11);
      pt[n] = h0;
      auto point = evaluate(map, nb, pt, d);
      if (point) points_.push_back(std::move(*point));
    }
  }

  // True when the sampled system has only the zero solution at h0, which
  // proves there is none over Q(h).
  bool excludes(const CofactorCandidate& cand) const {
    if (points_.size() < columns_.size()) return false;
    std::vector<std::vector<std::uint64_t>> rows;
    for (const auto& pt : points_) {
      std::uint64_t F = cand.sign > 0 ? 1 : kPrime - 1;
      std::uint64_t G = 1;
      for (std::size_t i = 0; i < cand.f.size(); ++i) F = mulmod(F, powmod(pt.K[i], cand.f[i]));
      for (std::size_t j = 0; j < cand.g.size(); ++j) G = mulmod(G, powmod(pt.D[j], cand.g[j]));
      std::vector<std::uint64_t> row(columns_.size());
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        row[c] = (mulmod(pt.A[c], G) + kPrime - mulmod(F, pt.B[c])) % kPrime;
      }
      rows.push_back(std::move(row));
    }
    return rank_modp(std::move(rows), columns_.size()) == static_cast<int>(columns_.size());
  }

 private:
  struct Point {
    std::vector<std::uint64_t> A, B, K, D;
  };

  std::optional<Point> evaluate(const BirationalMap& map, const NormalizedBasis& nb, const std::vector<Rational>& pt,
                                int d) const {
    const int n = map.n;
    auto Dv = to_modp(map.common_den.eval(pt));
    if (!Dv || *Dv == 0) return std::nullopt;
    std::vector<std::uint64_t> N(n), X(n);
    for (int i = 0; i < n; ++i) {
      auto v = to_modp(map.numerators[i].eval(pt));
      auto x = to_modp(pt[i]);
      if (!v || !x) return std::nullopt;
      N[i] = *v;
      X[i] = *x;
    }
    Point p;
    for (const auto& f : nb.K) {
      auto v = to_modp(f.eval(pt));
      if (!v || *v == 0) return std::nullopt;
      p.K.push_back(*v);
    }
    for (const auto& f : nb.D) {
      auto v = to_modp(f.eval(pt));
      if (!v || *v == 0) return std::nullopt;
      p.D.push_back(*v);
    }
    const std::uint64_t Dd = powmod(*Dv, d);
    for (const auto& m : columns_) {
      std::uint64_t a = powmod(*Dv, d - m.degree());
      std::uint64_t b = Dd;
      for (int i = 0; i < n; ++i) {
        a = mulmod(a, powmod(N[i], m[i]));
        b = mulmod(b, powmod(X[i], m[i]));
      }
      p.A.push_back(a);
      p.B.push_back(b);
    }
    return p;
  }

  std::vector<Monomial> columns_;
  std::vector<Point> points_;
};

std::vector<std::vector<UniPoly>> split_rows(const std::vector<MultiPoly>& cols, int n) {
  std::map<Monomial, std::vector<std::vector<Rational>>> rows;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& t : cols[c].terms()) {
      Monomial key = t.mono;
      const int hk = key[n];
      key.set(n, 0);
      auto& row = rows[key];
      if (row.empty()) row.resize(cols.size());
      auto& cell = row[c];
      if (static_cast<int>(cell.size()) <= hk) cell.resize(hk + 1);
      cell[hk] += t.coef;
    }
  }
  std::vector<std::vector<UniPoly>> out;
  for (auto& [key, row] : rows) {
    std::vector<UniPoly> r;
    for (auto& cell : row) r.emplace_back(std::move(cell));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<MultiPoly> cleared_columns(ClearedForm& form, const NormalizedBasis& nb, const CofactorCandidate& cand,
                                       int nvars) {
  const MultiPoly G = product(nb.D, cand.g, nvars);
  const MultiPoly FD = product(nb.K, cand.f, nvars) * form.Dd() * Rational(cand.sign);
  std::vector<MultiPoly> cols;
  const auto& A = form.A();
  for (std::size_t c = 0; c < form.columns().size(); ++c) {
    cols.push_back(A[c] * G - FD.mul_monomial(form.columns()[c], 1));
  }
  return cols;
}

std::vector<DarbouxPair> solve_with(const BirationalMap& map, const FactorBasis& basis, const NormalizedBasis& nb,
                                    ClearedForm& form, const CofactorCandidate& cand, std::uint64_t seed) {
  const int n = map.n;
  auto matrix = split_rows(cleared_columns(form, nb, cand, n), n);
  std::vector<DarbouxPair> out;
  for (const auto& v : nullspace_over_Qh(matrix, seed)) {
    MultiPoly P(n);
    for (std::size_t c = 0; c < v.size(); ++c) {
      P += v[c].to_multipoly(n, n).mul_monomial(form.columns()[c], 1);
    }
    if (P.is_zero()) continue;
    DarbouxPair pair;
    pair.P = P.normalized();
    pair.cofactor = cand;
    pair.C = cofactor_function(basis, cand, n);
    pair.degree = pair.P.state_degree();
    if (!verify_dp_exact(map, basis, pair)) throw Error("nullspace vector fails the Darboux identity", "darboux");
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace

bool CofactorCandidate::is_tautology() const { return sign == 1 && total_exponent() == 0; }

int CofactorCandidate::total_exponent() const {
  int t = 0;
  for (int e : f) t += e;
  for (int e : g) t += e;
  return t;
}

CofactorEnumeration enumerate_cofactors(const FactorBasis& basis, int max_exp, std::size_t max_candidates) {
  if (max_exp < 1) throw InvalidInput("max_exp must be at least 1");
  CofactorEnumeration out;
  const std::size_t nf = basis.numerator_factors.size();
  const std::size_t ng = basis.denominator_factors.size();
  const std::size_t width = nf + ng;
  if (width == 0) return out;

  std::vector<std::vector<int>> vectors;
  std::vector<int> e(width, 0);
  for (;;) {
    vectors.push_back(e);
    std::size_t k = width;
    while (k > 0 && e[k - 1] == max_exp) e[--k] = 0;
    if (k == 0) break;
    ++e[k - 1];
  }
  std::stable_sort(vectors.begin(), vectors.end(), [](const auto& a, const auto& b) {
    int sa = 0, sb = 0;
    for (int x : a) sa += x;
    for (int x : b) sb += x;
    return sa < sb;
  });
  for (int sign : {1, -1}) {
    for (const auto& v : vectors) {
      CofactorCandidate c;
      c.sign = sign;
      c.f.assign(v.begin(), v.begin() + nf);
      c.g.assign(v.begin() + nf, v.end());
      if (c.is_tautology()) continue;
      ++out.total;
      if (out.candidates.size() < max_candidates) {
        out.candidates.push_back(std::move(c));
      } else {
        out.truncated = true;
      }
    }
  }
  return out;
}

Rational cofactor_scale(const FactorBasis& basis, const CofactorCandidate& cand) {
  Rational s = cand.sign;
  auto at0 = [](const MultiPoly& f) {
    MultiPoly c = f.partial_eval(f.h_slot(), 0);
    if (!c.is_constant() || c.is_zero()) throw InvalidInput("factor is not a nonzero constant at h = 0");
    return c.constant_term();
  };
  for (std::size_t i = 0; i < cand.f.size(); ++i) {
    for (int k = 0; k < cand.f[i]; ++k) s /= at0(basis.numerator_factors[i].first);
  }
  for (std::size_t j = 0; j < cand.g.size(); ++j) {
    for (int k = 0; k < cand.g[j]; ++k) s *= at0(basis.denominator_factors[j].first);
  }
  return s;
}

RationalFunction cofactor_function(const FactorBasis& basis, const CofactorCandidate& cand, int nvars) {
  MultiPoly num = MultiPoly::constant(nvars, cofactor_scale(basis, cand));
  MultiPoly den = MultiPoly::constant(nvars, 1);
  for (std::size_t i = 0; i < cand.f.size(); ++i) {
    if (cand.f[i] > 0) num = num * basis.numerator_factors[i].first.pow(cand.f[i]);
  }
  for (std::size_t j = 0; j < cand.g.size(); ++j) {
    if (cand.g[j] > 0) den = den * basis.denominator_factors[j].first.pow(cand.g[j]);
  }
  return RationalFunction(num, den);
}

std::vector<Monomial> dp_columns(int n, int max_degree) {
  std::vector<Monomial> out;
  std::vector<int> exps(n, 0);
  monomials_rec(n, 0, max_degree, exps, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<UniPoly>> dp_system(const BirationalMap& map, const FactorBasis& basis,
                                            const CofactorCandidate& cand, int max_degree) {
  ClearedForm form(map, max_degree);
  NormalizedBasis nb = normalize(basis, map.n);
  return split_rows(cleared_columns(form, nb, cand, map.n), map.n);
}

std::vector<DarbouxPair> solve_dp(const BirationalMap& map, const FactorBasis& basis, const CofactorCandidate& cand,
                                  int max_degree, std::uint64_t seed) {
  if (max_degree < 1) throw InvalidInput("max_degree must be at least 1");
  ClearedForm form(map, max_degree);
  NormalizedBasis nb = normalize(basis, map.n);
  return solve_with(map, basis, nb, form, cand, seed);
}

DarbouxSearch search_all(const BirationalMap& map, const FactorBasis& basis, const DarbouxOptions& options) {
  if (options.max_degree < 1) throw InvalidInput("max_degree must be at least 1");
  DarbouxSearch result;
  auto enumeration = enumerate_cofactors(basis, options.max_exp, options.max_candidates);
  result.candidates = enumeration.candidates.size();
  result.truncated = enumeration.truncated;
  if (enumeration.truncated) {
    result.notes.push_back("cofactor enumeration truncated at " + std::to_string(options.max_candidates) + " of " +
                           std::to_string(enumeration.total) + " candidates");
  }
  if (basis.size() == 0) {
    result.notes.push_back("Jacobian has no factors; only the tautological cofactor C = 1 remains");
    return result;
  }

  const int n = map.n;
  NormalizedBasis nb = normalize(basis, n);
  ClearedForm form(map, options.max_degree);
  RationalSampler rng(options.seed);
  std::optional<Probe> probe;
  if (options.prune) probe.emplace(map, nb, options.max_degree, rng);

  std::vector<DarbouxPair> found;
  for (std::size_t idx = 0; idx < enumeration.candidates.size(); ++idx) {
    const auto& cand = enumeration.candidates[idx];
    if (options.prune) {
      // C(x, 0) = -1 forces P(x, 0) = 0, impossible for P primitive in h.
      if (cand.sign < 0 || probe->excludes(cand)) {
        ++result.pruned;
        continue;
      }
    }
    ++result.solved;
    for (auto& pair : solve_with(map, basis, nb, form, cand, options.seed + idx)) {
      pair.candidate_index = idx;
      found.push_back(std::move(pair));
    }
  }

  for (auto& pair : found) {
    bool duplicate = false;
    for (const auto& kept : result.pairs) duplicate = duplicate || kept.P == pair.P;
    if (duplicate) continue;
    int count = 0;
    for (const auto& [f, m] : factor_irreducible(pair.P).factors) count += m;
    pair.reducible = count > 1;
    result.pairs.push_back(std::move(pair));
  }
  std::stable_sort(result.pairs.begin(), result.pairs.end(), [](const DarbouxPair& a, const DarbouxPair& b) {
    if (a.reducible != b.reducible) return !a.reducible;
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.candidate_index < b.candidate_index;
  });
  return result;
}

bool verify_dp_exact(const BirationalMap& map, const FactorBasis& basis, const DarbouxPair& pair) {
  const int n = map.n;
  const int d = pair.P.state_degree();
  if (d < 0) return false;
  NormalizedBasis nb = normalize(basis, n);
  std::vector<MultiPoly> dpow{MultiPoly::constant(n, 1)};
  for (int k = 1; k <= d; ++k) dpow.push_back(dpow.back() * map.common_den);
  MultiPoly lhs(n);
  for (const auto& t : pair.P.terms()) {
    MultiPoly term = dpow[d - t.mono.degree_in_first(n)].mul_monomial(Monomial::unit(n, t.mono[n]), t.coef);
    for (int i = 0; i < n; ++i) {
      if (t.mono[i] > 0) term = term * map.numerators[i].pow(t.mono[i]);
    }
    lhs += term;
  }
  lhs = lhs * product(nb.D, pair.cofactor.g, n);
  MultiPoly rhs = product(nb.K, pair.cofactor.f, n) * dpow[d] * pair.P * Rational(pair.cofactor.sign);
  return lhs == rhs;
}

bool verify_dp_at_points(const BirationalMap& map, const DarbouxPair& pair, std::uint64_t seed, int count) {
  const int n = map.n;
  RationalSampler rng(seed);
  int done = 0;
  for (int attempt = 0; done < count && attempt < 50 * count; ++attempt) {
    std::vector<Rational> pt(n + 1);
    for (auto& v : pt) v = rng.next_rational(13, 7);
    if (pt[n] == 0) continue;
    auto image = map.apply(pt);
    if (!image || pair.C.den().eval(pt) == 0) continue;
    image->push_back(pt[n]);
    if (pair.P.eval(*image) != pair.C.eval(pt) * pair.P.eval(pt)) return false;
    ++done;
  }
  return done == count;
}

}  // namespace kd
