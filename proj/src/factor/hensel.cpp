#include <algorithm>

#include "internal.hpp"
#include "kd/errors.hpp"
#include "kd/gcd.hpp"

namespace kd::detail {

namespace {

struct LiftContext {
  int nvars;
  int main;
  const LiftBudget* budget;
};

void check_size(const LiftContext& ctx, const MultiPoly& p) {
  if (p.size() > ctx.budget->max_terms) throw ResourceBudgetExceeded("Hensel lifting exceeded the term budget", "factor");
}

MultiPoly linear_power(int nvars, int slot, const Rational& a, int k) {
  MultiPoly base = MultiPoly::variable(nvars, slot) - MultiPoly::constant(nvars, a);
  return base.pow(k);
}

// s1 * a2 + s2 * a1 = c with deg_main(s1) < deg_main(a1); the variables
// ys[0..m) are expanded around vals.
std::optional<std::pair<MultiPoly, MultiPoly>> diophantine(const LiftContext& ctx, const MultiPoly& a1,
                                                           const MultiPoly& a2, const MultiPoly& c,
                                                           std::span<const int> ys, std::span<const Rational> vals,
                                                           int degree_bound) {
  const int nv = ctx.nvars;
  if (c.is_zero()) return std::make_pair(MultiPoly(nv), MultiPoly(nv));
  if (ys.empty()) {
    UniPoly A1 = UniPoly::from_multipoly(a1, ctx.main);
    UniPoly A2 = UniPoly::from_multipoly(a2, ctx.main);
    UniPoly C = UniPoly::from_multipoly(c, ctx.main);
    ExtendedGcd ext = extended_gcd(A1, A2);
    if (ext.g.degree() != 0) return std::nullopt;
    UniPoly s1 = (ext.t * C).divmod(A1).second;
    auto [s2, rem] = (C - s1 * A2).divmod(A1);
    if (!rem.is_zero()) return std::nullopt;
    return std::make_pair(s1.to_multipoly(nv, ctx.main), s2.to_multipoly(nv, ctx.main));
  }
  const int y = ys.back();
  const Rational& alpha = vals.back();
  auto lower_ys = ys.first(ys.size() - 1);
  auto lower_vals = vals.first(vals.size() - 1);
  MultiPoly a1e = a1.partial_eval(y, alpha);
  MultiPoly a2e = a2.partial_eval(y, alpha);
  auto base = diophantine(ctx, a1e, a2e, c.partial_eval(y, alpha), lower_ys, lower_vals, degree_bound);
  if (!base) return std::nullopt;
  auto [s1, s2] = *base;
  MultiPoly e = c - s1 * a2 - s2 * a1;
  for (int k = 1; k <= degree_bound && !e.is_zero(); ++k) {
    auto coeffs = e.shift(y, alpha).coefficients_in(y);
    if (k >= static_cast<int>(coeffs.size()) || coeffs[k].is_zero()) continue;
    auto step = diophantine(ctx, a1e, a2e, coeffs[k], lower_ys, lower_vals, degree_bound);
    if (!step) return std::nullopt;
    MultiPoly m = linear_power(nv, y, alpha, k);
    s1 += step->first * m;
    s2 += step->second * m;
    e = c - s1 * a2 - s2 * a1;
    check_size(ctx, e);
  }
  if (!e.is_zero()) return std::nullopt;
  return std::make_pair(s1, s2);
}

MultiPoly replace_leading(const MultiPoly& g, int main, int degree, const MultiPoly& lc) {
  auto coeffs = g.coefficients_in(main);
  coeffs.resize(degree + 1, MultiPoly(g.nvars()));
  coeffs[degree] = lc;
  return MultiPoly::from_coefficients(g.nvars(), main, coeffs);
}

// Lifts the image split q(x, a) ~ g0 * h0 to a factor of q, or nullopt when
// the split does not come from a factorization over Q.
std::optional<MultiPoly> lift_split(const LiftContext& ctx, const MultiPoly& q, std::span<const int> ys,
                                    std::span<const Rational> vals, const UniPoly& g0, const UniPoly& h0) {
  const int nv = ctx.nvars;
  const int main = ctx.main;
  const MultiPoly lc = q.leading_coefficient_in(main);
  const MultiPoly target = lc * q;
  const Rational lc_at = lc.partial_eval(ys, vals).constant_term();
  MultiPoly G = (g0 * (lc_at / g0.lead())).to_multipoly(nv, main);
  MultiPoly H = (h0 * (lc_at / h0.lead())).to_multipoly(nv, main);
  const int dg = g0.degree();
  const int dh = h0.degree();

  for (std::size_t j = 0; j < ys.size(); ++j) {
    auto rest_ys = ys.subspan(j + 1);
    auto rest_vals = vals.subspan(j + 1);
    const int y = ys[j];
    const Rational& a = vals[j];
    MultiPoly Tj = target.partial_eval(rest_ys, rest_vals).shift(y, a);
    MultiPoly lj = lc.partial_eval(rest_ys, rest_vals).shift(y, a);
    G = replace_leading(G, main, dg, lj);
    H = replace_leading(H, main, dh, lj);
    const MultiPoly G0 = G.partial_eval(y, 0);
    const MultiPoly H0 = H.partial_eval(y, 0);
    const int bound = Tj.degree(y);
    const int dioph_bound = std::max(0, Tj.total_degree());
    MultiPoly e = Tj - G * H;
    const MultiPoly yvar = MultiPoly::variable(nv, y);
    for (int k = 1; k <= bound && !e.is_zero(); ++k) {
      auto coeffs = e.coefficients_in(y);
      if (k >= static_cast<int>(coeffs.size()) || coeffs[k].is_zero()) continue;
      auto sol = diophantine(ctx, G0, H0, coeffs[k], ys.first(j), vals.first(j), dioph_bound);
      if (!sol) return std::nullopt;
      MultiPoly yk = yvar.pow(k);
      G += sol->first * yk;
      H += sol->second * yk;
      e = Tj - G * H;
      check_size(ctx, e);
    }
    if (!e.is_zero()) return std::nullopt;
    G = G.shift(y, -a);
    H = H.shift(y, -a);
  }
  if (G * H != target) return std::nullopt;
  MultiPoly f = primitive_part_in(G, main).normalized();
  if (!q.try_div(f)) return std::nullopt;
  return f;
}

}  // namespace

std::optional<Restriction> admissible_restriction(const MultiPoly& q, int main, RationalSampler& rng, int attempts) {
  Restriction r;
  for (int s : q.support()) {
    if (s != main) r.slots.push_back(s);
  }
  const int deg = q.degree(main);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const long range = 4 + 2 * attempt;
    r.values.clear();
    for (std::size_t i = 0; i < r.slots.size(); ++i) r.values.push_back(Rational(rng.next_int(-range, range)));
    MultiPoly img = q.partial_eval(r.slots, r.values);
    UniPoly u = UniPoly::from_multipoly(img, main);
    if (u.degree() != deg) continue;
    if (gcd(u, u.derivative()).degree() != 0) continue;
    r.image = std::move(u);
    return r;
  }
  return std::nullopt;
}

std::optional<std::vector<MultiPoly>> factor_multivariate(const MultiPoly& q, int main, RationalSampler& rng,
                                                          const LiftBudget& budget) {
  // Several restrictions; the one with fewest image factors bounds the
  // number of true factors and keeps recombination small.
  std::optional<Restriction> best;
  std::vector<UniPoly> best_factors;
  for (int k = 0; k < 3; ++k) {
    auto r = admissible_restriction(q, main, rng, budget.evaluation_attempts);
    if (!r) break;
    auto facs = factor_squarefree_q(r->image, rng);
    if (!best || facs.size() < best_factors.size()) {
      best = std::move(r);
      best_factors = std::move(facs);
    }
    if (best_factors.size() == 1) return std::vector<MultiPoly>{q.normalized()};
  }
  if (!best) return std::nullopt;
  if (static_cast<int>(best_factors.size()) > budget.max_subset_factors) {
    throw ResourceBudgetExceeded("too many image factors for recombination", "factor");
  }

  const LiftContext ctx{q.nvars(), main, &budget};
  std::vector<MultiPoly> result;
  std::vector<UniPoly> remaining = best_factors;
  MultiPoly cur = q;
  int s = 1;
  while (2 * s <= static_cast<int>(remaining.size())) {
    const int m = static_cast<int>(remaining.size());
    bool found = false;
    std::vector<int> idx(s);
    for (int i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      UniPoly g = UniPoly::constant(1), h = UniPoly::constant(1);
      for (int i = 0; i < m; ++i) {
        if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
          g = g * remaining[i];
        } else {
          h = h * remaining[i];
        }
      }
      if (auto f = lift_split(ctx, cur, best->slots, best->values, g, h)) {
        result.push_back(*f);
        cur = cur.exact_div(*f);
        std::vector<UniPoly> keep;
        for (int i = 0; i < m; ++i) {
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) keep.push_back(remaining[i]);
        }
        remaining = std::move(keep);
        found = true;
        break;
      }
      int pos = s - 1;
      while (pos >= 0 && idx[pos] == m - s + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < s; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found) ++s;
  }
  if (!cur.is_constant()) result.push_back(cur.normalized());
  return result;
}

}  // namespace kd::detail
