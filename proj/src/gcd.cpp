#include "kd/gcd.hpp"

#include <algorithm>

#include "kd/errors.hpp"
#include "kd/unipoly.hpp"

namespace kd {

namespace {

// Recursive dense representation in one main slot; coefficient k multiplies
// slot^k and is free of that slot.
using Rec = std::vector<MultiPoly>;

void trim(Rec& r) {
  while (!r.empty() && r.back().is_zero()) r.pop_back();
}

int rec_degree(const Rec& r) { return static_cast<int>(r.size()) - 1; }

// lc(B)^(deg A - deg B + 1) * A  mod  B
Rec pseudo_remainder(Rec r, const Rec& b) {
  const int n = rec_degree(b);
  int e = rec_degree(r) - n + 1;
  const MultiPoly& lb = b.back();
  while (!r.empty() && rec_degree(r) >= n) {
    MultiPoly lr = r.back();
    int shift = rec_degree(r) - n;
    for (auto& c : r) c = c * lb;
    for (int j = 0; j <= n; ++j) r[j + shift] -= lr * b[j];
    trim(r);
    --e;
  }
  if (e > 0 && !r.empty()) {
    MultiPoly scale = lb.pow(e);
    for (auto& c : r) c = c * scale;
  }
  return r;
}

MultiPoly one_like(const MultiPoly& p) { return MultiPoly::constant(p.nvars(), 1); }

class GcdEngine {
 public:
  GcdEngine() : rng_(0x6364636f6d707574ULL) {}

  MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_constant() || b.is_constant()) return one_like(a);
    if (a == b) return a;
    if (a.size() <= b.size()) {
      if (b.try_div(a)) return a;
    } else if (a.try_div(b)) {
      return b;
    }

    auto sa = a.support();
    auto sb = b.support();
    for (int s : sa) {
      if (!b.depends_on(s)) return gcd(content(a, s), b);
    }
    for (int s : sb) {
      if (!a.depends_on(s)) return gcd(a, content(b, s));
    }

    // Slots ordered by the larger of the two degrees, smallest first.
    std::vector<int> slots = sa;
    std::sort(slots.begin(), slots.end(), [&](int x, int y) {
      int dx = std::max(a.degree(x), b.degree(x));
      int dy = std::max(a.degree(y), b.degree(y));
      return dx != dy ? dx < dy : x < y;
    });

    // A univariate image whose gcd is constant proves the true gcd is free
    // of that slot (the leading coefficients do not vanish at the point).
    for (int s : slots) {
      if (image_gcd_degree(a, b, s) == 0) return gcd(content(a, s), content(b, s));
    }

    const int s = slots.front();
    MultiPoly ca = content(a, s);
    MultiPoly cb = content(b, s);
    MultiPoly pa = a.exact_div(ca);
    MultiPoly pb = b.exact_div(cb);
    MultiPoly g = gcd(ca, cb) * subresultant(pa, pb, s);
    return g.normalized();
  }

  MultiPoly content(const MultiPoly& p, int slot) {
    if (p.is_zero()) return p;
    auto coeffs = p.coefficients_in(slot);
    std::vector<MultiPoly> nz;
    for (auto& c : coeffs) {
      if (c.is_zero()) continue;
      if (c.is_constant()) return one_like(p);
      nz.push_back(std::move(c));
    }
    std::sort(nz.begin(), nz.end(), [](const MultiPoly& x, const MultiPoly& y) { return x.size() < y.size(); });
    MultiPoly g = nz.front().normalized();
    for (std::size_t i = 1; i < nz.size() && !g.is_constant(); ++i) g = gcd(g, nz[i].normalized());
    return g.is_constant() ? one_like(p) : g;
  }

 private:
  // Degree of the gcd of a univariate image in `slot`, or -1 when no
  // admissible evaluation point was found.
  int image_gcd_degree(const MultiPoly& a, const MultiPoly& b, int slot) {
    const int da = a.degree(slot);
    const int db = b.degree(slot);
    std::vector<int> others;
    for (int s = 0; s < a.nslots(); ++s) {
      if (s != slot && (a.depends_on(s) || b.depends_on(s))) others.push_back(s);
    }
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::vector<Rational> values;
      for (std::size_t i = 0; i < others.size(); ++i) values.push_back(Rational(rng_.next_int(-20, 20)));
      MultiPoly ia = a.partial_eval(others, values);
      MultiPoly ib = b.partial_eval(others, values);
      if (ia.degree(slot) != da || ib.degree(slot) != db) continue;
      UniPoly ua = UniPoly::from_multipoly(ia, slot);
      UniPoly ub = UniPoly::from_multipoly(ib, slot);
      return kd::gcd(ua, ub).degree();
    }
    return -1;
  }

  MultiPoly primitive(const MultiPoly& p, int slot) { return p.exact_div(content(p, slot)); }

  // gcd of two polynomials primitive in `slot`, both of positive degree in it.
  MultiPoly subresultant(const MultiPoly& pa, const MultiPoly& pb, int slot) {
    Rec A = pa.coefficients_in(slot);
    Rec B = pb.coefficients_in(slot);
    if (rec_degree(A) < rec_degree(B)) std::swap(A, B);
    MultiPoly g = one_like(pa);
    MultiPoly h = one_like(pa);
    while (true) {
      int delta = rec_degree(A) - rec_degree(B);
      Rec R = pseudo_remainder(A, B);
      if (R.empty()) break;
      if (rec_degree(R) == 0) return one_like(pa);
      A = std::move(B);
      MultiPoly divisor = g * h.pow(delta);
      for (auto& c : R) c = c.exact_div(divisor);
      B = std::move(R);
      g = A.back();
      if (delta == 1) {
        h = g;
      } else if (delta > 1) {
        h = g.pow(delta).exact_div(h.pow(delta - 1));
      }
    }
    return primitive(MultiPoly::from_coefficients(pa.nvars(), slot, B), slot).normalized();
  }

  RationalSampler rng_;
};

}  // namespace

MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) throw InvalidInput("gcd of polynomials over different variable sets");
  if (a.is_zero() && b.is_zero()) throw InvalidInput("gcd(0, 0) is undefined");
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  GcdEngine engine;
  return engine.gcd(a.normalized(), b.normalized()).normalized();
}

MultiPoly poly_gcd(const std::vector<MultiPoly>& polys) {
  MultiPoly g;
  bool started = false;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    g = started ? poly_gcd(g, p) : p.normalized();
    started = true;
    if (g.is_constant()) break;
  }
  if (!started) throw InvalidInput("gcd of an all-zero list");
  return g;
}

MultiPoly content_in(const MultiPoly& p, int slot) {
  if (p.is_zero()) return p;
  GcdEngine engine;
  return engine.content(p.normalized(), slot).normalized();
}

MultiPoly primitive_part_in(const MultiPoly& p, int slot) {
  if (p.is_zero()) return p;
  return p.exact_div(content_in(p, slot));
}

MultiPoly poly_lcm(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero() || b.is_zero()) return MultiPoly(a.nvars());
  return (a * b).exact_div(poly_gcd(a, b)).normalized();
}

}  // namespace kd
