#include <algorithm>

#include "internal.hpp"
#include "kd/errors.hpp"

namespace kd::detail {

namespace {

using ZPoly = std::vector<Integer>;

void trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  trim(r);
  return r;
}

void mod_in_place(ZPoly& f, const Integer& m) {
  for (auto& c : f) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  trim(f);
}

// Representatives in (-m/2, m/2].
void symmetric(ZPoly& f, const Integer& m) {
  const Integer half = m / 2;
  for (auto& c : f) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
  }
  trim(f);
}

ZPoly to_z(const FpPoly& f) {
  ZPoly r;
  r.reserve(f.size());
  for (auto c : f) r.emplace_back(static_cast<unsigned long>(c));
  return r;
}

Integer content(const ZPoly& f) {
  Integer g = 0;
  for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

ZPoly primitive(ZPoly f) {
  trim(f);
  if (f.empty()) return f;
  Integer g = content(f);
  if (f.back() < 0) g = -g;
  for (auto& c : f) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return f;
}

// Exact quotient a / b over Z, or empty optional.
std::optional<ZPoly> divide_exact(const ZPoly& a, const ZPoly& b) {
  if (b.size() > a.size()) return std::nullopt;
  if (a[0] != 0 && b[0] != 0 && !mpz_divisible_p(a[0].get_mpz_t(), b[0].get_mpz_t())) return std::nullopt;
  ZPoly r = a;
  ZPoly q(a.size() - b.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    Integer& top = r[k + b.size() - 1];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.back().get_mpz_t())) return std::nullopt;
    mpz_divexact(q[k].get_mpz_t(), top.get_mpz_t(), b.back().get_mpz_t());
    for (std::size_t j = 0; j < b.size(); ++j) mpz_submul(r[k + j].get_mpz_t(), q[k].get_mpz_t(), b[j].get_mpz_t());
  }
  for (const auto& c : r) {
    if (c != 0) return std::nullopt;
  }
  trim(q);
  return q;
}

bool next_prime_candidate(std::uint64_t& p) {
  for (p += 2;; p += 2) {
    bool prime = true;
    for (std::uint64_t d = 3; d * d <= p; d += 2) {
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) return true;
  }
}

// Lift f_monic = g * h (mod p) to (mod p^k) with monic G, H.
std::pair<ZPoly, ZPoly> hensel_two(const PrimeField& F, const ZPoly& f_monic, const FpPoly& g, const FpPoly& h,
                                   int k) {
  auto [s, t] = F.bezout(g, h);
  ZPoly G = to_z(g), H = to_z(h);
  Integer pk = static_cast<unsigned long>(F.p);
  for (int step = 1; step < k; ++step) {
    Integer next = pk * static_cast<unsigned long>(F.p);
    ZPoly gh = mul(G, H);
    ZPoly e(std::max(f_monic.size(), gh.size()), 0);
    for (std::size_t i = 0; i < f_monic.size(); ++i) e[i] = f_monic[i];
    for (std::size_t i = 0; i < gh.size(); ++i) e[i] -= gh[i];
    mod_in_place(e, next);
    std::vector<Integer> ek(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) mpz_divexact(ek[i].get_mpz_t(), e[i].get_mpz_t(), pk.get_mpz_t());
    FpPoly ekp = F.reduce(ek);
    FpPoly dg = F.mod(F.mul(t, ekp), g);
    FpPoly dh = F.mod(F.mul(s, ekp), h);
    for (std::size_t i = 0; i < dg.size(); ++i) G[i] += pk * static_cast<unsigned long>(dg[i]);
    for (std::size_t i = 0; i < dh.size(); ++i) H[i] += pk * static_cast<unsigned long>(dh[i]);
    pk = next;
  }
  return {G, H};
}

}  // namespace

std::vector<ZPoly> factor_squarefree_zz(const ZPoly& f_in, RationalSampler& rng) {
  ZPoly f = primitive(f_in);
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 0) return {};
  if (n == 1) return {f};

  // Choose the prime giving the fewest modular factors among a few candidates.
  std::uint64_t p = 9;
  std::optional<PrimeField> best;
  std::vector<FpPoly> best_factors;
  int good = 0;
  while (good < 5) {
    next_prime_candidate(p);
    PrimeField F{p};
    if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) continue;
    FpPoly fp = F.reduce(f);
    if (F.gcd(fp, F.derivative(fp)).size() != 1) continue;
    ++good;
    auto facs = factor_mod_p(F, fp, rng);
    if (!best || facs.size() < best_factors.size()) {
      best = F;
      best_factors = std::move(facs);
    }
    if (best_factors.size() == 1) return {f};
  }
  const PrimeField F = *best;
  const int r = static_cast<int>(best_factors.size());
  if (r > 24) throw ResourceBudgetExceeded("too many modular factors for recombination", "factor");

  // Mignotte-style bound: factor coefficients are below 2^n sqrt(n+1) |f|_inf.
  Integer maxabs = 0;
  for (const auto& c : f) maxabs = std::max(maxabs, Integer(abs(c)));
  Integer bound = maxabs * (n + 1) * abs(f.back()) * 2;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), n);
  Integer modulus = static_cast<unsigned long>(F.p);
  int k = 1;
  while (modulus <= bound) {
    modulus *= static_cast<unsigned long>(F.p);
    ++k;
  }

  // f / lc(f) modulo p^k.
  Integer lc_inv;
  mpz_invert(lc_inv.get_mpz_t(), f.back().get_mpz_t(), modulus.get_mpz_t());
  ZPoly cur = f;
  for (auto& c : cur) c *= lc_inv;
  mod_in_place(cur, modulus);

  std::vector<ZPoly> lifted;
  for (int i = 0; i + 1 < r; ++i) {
    FpPoly rest{1};
    for (int j = i + 1; j < r; ++j) rest = F.mul(rest, best_factors[j]);
    auto [G, H] = hensel_two(F, cur, best_factors[i], rest, k);
    mod_in_place(G, modulus);
    mod_in_place(H, modulus);
    lifted.push_back(std::move(G));
    cur = std::move(H);
  }
  lifted.push_back(cur);

  std::vector<ZPoly> result;
  std::vector<int> remaining(r);
  for (int i = 0; i < r; ++i) remaining[i] = i;
  ZPoly fc = f;
  int s = 1;
  while (2 * s <= static_cast<int>(remaining.size())) {
    bool found = false;
    const int m = static_cast<int>(remaining.size());
    std::vector<int> idx(s);
    for (int i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      ZPoly cand{fc.back()};
      for (int i : idx) {
        cand = mul(cand, lifted[remaining[i]]);
        mod_in_place(cand, modulus);
      }
      symmetric(cand, modulus);
      cand = primitive(cand);
      if (auto q = divide_exact(fc, cand)) {
        result.push_back(cand);
        fc = primitive(*q);
        std::vector<int> keep;
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
  if (fc.size() > 1) result.push_back(fc);
  return result;
}

std::vector<UniPoly> factor_squarefree_q(const UniPoly& f, RationalSampler& rng) {
  if (f.degree() <= 0) return {};
  UniPoly pf = f.primitive();
  ZPoly z;
  for (const auto& c : pf.coeffs()) z.push_back(c.get_num());
  std::vector<UniPoly> out;
  for (const auto& g : factor_squarefree_zz(z, rng)) {
    std::vector<Rational> c(g.begin(), g.end());
    out.emplace_back(std::move(c));
  }
  return out;
}

}  // namespace kd::detail
