#include <algorithm>

#include "internal.hpp"

namespace kd::detail {

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

FpPoly PrimeField::reduce(const std::vector<Integer>& f) const {
  FpPoly out(f.size());
  mpz_class m(static_cast<unsigned long>(p));
  for (std::size_t i = 0; i < f.size(); ++i) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), f[i].get_mpz_t(), m.get_mpz_t());
    out[i] = r.get_ui();
  }
  trim(out);
  return out;
}

void PrimeField::trim(FpPoly& f) const {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

FpPoly PrimeField::add(const FpPoly& a, const FpPoly& b) const {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = add(r[i], b[i]);
  trim(r);
  return r;
}

FpPoly PrimeField::sub(const FpPoly& a, const FpPoly& b) const {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = sub(r[i], b[i]);
  trim(r);
  return r;
}

FpPoly PrimeField::mul(const FpPoly& a, const FpPoly& b) const {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

std::pair<FpPoly, FpPoly> PrimeField::divmod(const FpPoly& a, const FpPoly& b) const {
  FpPoly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  FpPoly q(r.size() - b.size() + 1, 0);
  const std::uint64_t li = inv(b.back());
  for (std::size_t k = q.size(); k-- > 0;) {
    std::uint64_t c = mul(r[k + b.size() - 1], li);
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = sub(r[k + j], mul(c, b[j]));
  }
  r.resize(b.size() - 1);
  trim(r);
  trim(q);
  return {q, r};
}

FpPoly PrimeField::monic(const FpPoly& a) const {
  if (a.empty()) return a;
  FpPoly r = a;
  std::uint64_t li = inv(a.back());
  for (auto& c : r) c = mul(c, li);
  return r;
}

FpPoly PrimeField::gcd(FpPoly a, FpPoly b) const {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

std::pair<FpPoly, FpPoly> PrimeField::bezout(const FpPoly& a, const FpPoly& b) const {
  FpPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    FpPoly s2 = sub(s0, mul(q, s1));
    FpPoly t2 = sub(t0, mul(q, t1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // r0 is a nonzero constant for coprime inputs.
  std::uint64_t li = inv(r0.back());
  for (auto& c : s0) c = mul(c, li);
  for (auto& c : t0) c = mul(c, li);
  return {s0, t0};
}

FpPoly PrimeField::derivative(const FpPoly& a) const {
  if (a.size() <= 1) return {};
  FpPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mul(a[i], i % p);
  trim(r);
  return r;
}

FpPoly PrimeField::powmod(FpPoly base, const Integer& e, const FpPoly& m) const {
  FpPoly r{1};
  r = mod(r, m);
  base = mod(base, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mod(mul(r, r), m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, base), m);
  }
  return r;
}

namespace {

void equal_degree(const PrimeField& F, const FpPoly& g, int d, RationalSampler& rng, std::vector<FpPoly>& out) {
  const int n = static_cast<int>(g.size()) - 1;
  if (n == d) {
    out.push_back(g);
    return;
  }
  Integer pd;
  mpz_ui_pow_ui(pd.get_mpz_t(), F.p, d);
  const Integer e = (pd - 1) / 2;
  for (;;) {
    FpPoly a(n);
    for (auto& c : a) c = rng.next_u64() % F.p;
    F.trim(a);
    if (a.size() < 2) continue;
    FpPoly b = F.sub(F.powmod(a, e, g), FpPoly{1});
    FpPoly c = F.gcd(b, g);
    if (c.size() > 1 && c.size() < g.size()) {
      FpPoly rest = F.monic(F.divmod(g, c).first);
      equal_degree(F, c, d, rng, out);
      equal_degree(F, rest, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<FpPoly> factor_mod_p(const PrimeField& F, const FpPoly& f_in, RationalSampler& rng) {
  std::vector<FpPoly> out;
  FpPoly f = F.monic(f_in);
  const FpPoly x{0, 1};
  FpPoly h = x;
  int d = 0;
  while (static_cast<int>(f.size()) - 1 >= 2 * (d + 1)) {
    ++d;
    h = F.powmod(h, Integer(static_cast<unsigned long>(F.p)), f);
    FpPoly g = F.gcd(F.sub(h, x), f);
    if (g.size() > 1) {
      equal_degree(F, g, d, rng, out);
      f = F.monic(F.divmod(f, g).first);
      h = F.mod(h, f);
    }
  }
  if (f.size() > 1) out.push_back(f);
  std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

}  // namespace kd::detail
