#include "kd/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "kd/errors.hpp"

namespace kd {

namespace {

bool term_greater(const MultiPoly::Term& a, const MultiPoly::Term& b) { return a.mono > b.mono; }

void check_slots(int nvars) {
  if (nvars < 0 || nvars + 1 > Monomial::kMaxSlots) {
    throw ResourceBudgetExceeded("variable count " + std::to_string(nvars) + " exceeds supported maximum " +
                                 std::to_string(Monomial::kMaxSlots - 1));
  }
}

void check_compatible(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) {
    throw InvalidInput("polynomials over different variable sets (" + std::to_string(a.nvars()) + " vs " +
                       std::to_string(b.nvars()) + ")");
  }
}

// Power tables for evaluation: table[slot][k] = value^k.
template <typename T>
std::vector<std::vector<T>> power_table(const MultiPoly& p, std::span<const T> point) {
  std::vector<std::vector<T>> table(p.nslots());
  for (int s = 0; s < p.nslots(); ++s) {
    int d = std::max(p.degree(s), 0);
    table[s].resize(d + 1);
    table[s][0] = T(1);
    for (int k = 1; k <= d; ++k) table[s][k] = table[s][k - 1] * point[s];
  }
  return table;
}

}  // namespace

MultiPoly::MultiPoly(int nvars) : nvars_(nvars) { check_slots(nvars); }

MultiPoly::MultiPoly(int nvars, std::vector<Term> terms) : nvars_(nvars), terms_(std::move(terms)) {
  check_slots(nvars);
  canonicalize();
}

void MultiPoly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), term_greater);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef == 0) out.pop_back();
  terms_ = std::move(out);
}

MultiPoly MultiPoly::constant(int nvars, const Rational& c) {
  MultiPoly p(nvars);
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int slot) {
  if (slot < 0 || slot > nvars) throw InvalidInput("variable slot out of range");
  MultiPoly p(nvars);
  p.terms_.push_back({Monomial::unit(slot), Rational(1)});
  return p;
}

MultiPoly MultiPoly::monomial(int nvars, const Monomial& m, const Rational& c) {
  MultiPoly p(nvars);
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

bool MultiPoly::is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1; }

Rational MultiPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coef;
  return 0;
}

Rational MultiPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.mono > key; });
  if (it != terms_.end() && it->mono == m) return it->coef;
  return 0;
}

int MultiPoly::total_degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree(); }

int MultiPoly::degree(int slot) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono[slot]);
  return d;
}

int MultiPoly::min_degree(int slot) const {
  if (terms_.empty()) return -1;
  int d = Monomial::kMaxDegree;
  for (const auto& t : terms_) d = std::min(d, t.mono[slot]);
  return d;
}

int MultiPoly::state_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree_in_first(nvars_));
  return d;
}

std::vector<int> MultiPoly::support() const {
  std::vector<int> s;
  for (int i = 0; i < nslots(); ++i) {
    if (depends_on(i)) s.push_back(i);
  }
  return s;
}

bool MultiPoly::is_univariate_in(int slot) const {
  for (const auto& t : terms_) {
    if (t.mono.degree() != t.mono[slot]) return false;
  }
  return true;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_compatible(*this, o);
  if (o.terms_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->mono > b->mono)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->mono > a->mono) {
      out.push_back(*b++);
    } else {
      Rational c = a->coef + b->coef;
      if (c != 0) out.push_back({a->mono, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  check_compatible(a, b);
  MultiPoly r(a.nvars_);
  if (a.is_zero() || b.is_zero()) return r;
  if (a.size() == 1) return b.mul_monomial(a.terms_[0].mono, a.terms_[0].coef);
  if (b.size() == 1) return a.mul_monomial(b.terms_[0].mono, b.terms_[0].coef);
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(a.size() * b.size() / 2 + 16);
  Rational prod;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      mpq_mul(prod.get_mpq_t(), ta.coef.get_mpq_t(), tb.coef.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(ta.mono * tb.mono);
      if (inserted) {
        it->second = prod;
      } else {
        mpq_add(it->second.get_mpq_t(), it->second.get_mpq_t(), prod.get_mpq_t());
      }
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) r.terms_.push_back({m, std::move(c)});
  }
  std::sort(r.terms_.begin(), r.terms_.end(), term_greater);
  return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  *this = *this * o;
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coef *= c;
  }
  return *this;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

MultiPoly MultiPoly::pow(int e) const {
  if (e < 0) throw InvalidInput("negative polynomial power");
  MultiPoly result = constant(nvars_, 1);
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::mul_monomial(const Monomial& m, const Rational& c) const {
  MultiPoly r(nvars_);
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
  return r;  // multiplication by a monomial preserves the order
}

std::optional<MultiPoly> MultiPoly::try_div(const MultiPoly& b) const {
  check_compatible(*this, b);
  if (b.is_zero()) throw InvalidInput("division by zero polynomial");
  MultiPoly q(nvars_);
  if (is_zero()) return q;
  if (b.size() == 1) {
    const auto& bt = b.terms_[0];
    for (const auto& t : terms_) {
      if (!bt.mono.divides(t.mono)) return std::nullopt;
      q.terms_.push_back({t.mono / bt.mono, t.coef / bt.coef});
    }
    return q;
  }
  // Quick degree screens before the full division.
  for (int s = 0; s < nslots(); ++s) {
    if (b.degree(s) > degree(s)) return std::nullopt;
  }
  std::map<Monomial, Rational, std::greater<>> rem;
  for (const auto& t : terms_) rem.emplace(t.mono, t.coef);
  const Term& lead = b.terms_.front();
  Rational factor;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!lead.mono.divides(top->first)) return std::nullopt;
    Monomial qm = top->first / lead.mono;
    Rational qc = top->second / lead.coef;
    q.terms_.push_back({qm, qc});
    rem.erase(top);
    for (std::size_t i = 1; i < b.terms_.size(); ++i) {
      Monomial m = b.terms_[i].mono * qm;
      mpq_mul(factor.get_mpq_t(), qc.get_mpq_t(), b.terms_[i].coef.get_mpq_t());
      auto [it, inserted] = rem.try_emplace(m);
      if (inserted) {
        it->second = -factor;
      } else {
        it->second -= factor;
        if (it->second == 0) rem.erase(it);
      }
    }
  }
  // Quotient terms were produced in strictly decreasing order.
  return q;
}

MultiPoly MultiPoly::exact_div(const MultiPoly& b) const {
  auto q = try_div(b);
  if (!q) throw NotDivisible("polynomial division leaves a nonzero remainder");
  return std::move(*q);
}

MultiPoly MultiPoly::divide_by(const Rational& c) const {
  if (c == 0) throw InvalidInput("division by zero");
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coef /= c;
  return r;
}

MultiPoly MultiPoly::derivative(int slot) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    int e = t.mono[slot];
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set(slot, e - 1);
    out.push_back({m, t.coef * e});
  }
  return MultiPoly(nvars_, std::move(out));
}

Rational MultiPoly::eval(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != nslots()) throw InvalidInput("evaluation point has wrong length");
  auto table = power_table<Rational>(*this, point);
  Rational sum = 0, term;
  for (const auto& t : terms_) {
    term = t.coef;
    for (int s = 0; s < nslots(); ++s) {
      int e = t.mono[s];
      if (e) term *= table[s][e];
    }
    sum += term;
  }
  return sum;
}

double MultiPoly::eval_double(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nslots()) throw InvalidInput("evaluation point has wrong length");
  auto table = power_table<double>(*this, point);
  double sum = 0;
  for (const auto& t : terms_) {
    double term = t.coef.get_d();
    for (int s = 0; s < nslots(); ++s) {
      if (int e = t.mono[s]) term *= table[s][e];
    }
    sum += term;
  }
  return sum;
}

long double MultiPoly::eval_long_double(std::span<const long double> point) const {
  if (static_cast<int>(point.size()) != nslots()) throw InvalidInput("evaluation point has wrong length");
  auto table = power_table<long double>(*this, point);
  long double sum = 0;
  for (const auto& t : terms_) {
    long double term = static_cast<long double>(t.coef.get_num().get_d()) /
                       static_cast<long double>(t.coef.get_den().get_d());
    for (int s = 0; s < nslots(); ++s) {
      if (int e = t.mono[s]) term *= table[s][e];
    }
    sum += term;
  }
  return sum;
}

MultiPoly MultiPoly::partial_eval(int slot, const Rational& value) const {
  int d = std::max(degree(slot), 0);
  std::vector<Rational> powers(d + 1);
  powers[0] = 1;
  for (int k = 1; k <= d; ++k) powers[k] = powers[k - 1] * value;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    int e = t.mono[slot];
    if (e == 0) {
      out.push_back(t);
    } else if (value != 0) {
      Monomial m = t.mono;
      m.set(slot, 0);
      out.push_back({m, t.coef * powers[e]});
    }
  }
  return MultiPoly(nvars_, std::move(out));
}

MultiPoly MultiPoly::partial_eval(std::span<const int> slots, std::span<const Rational> values) const {
  MultiPoly r = *this;
  for (std::size_t i = 0; i < slots.size(); ++i) r = r.partial_eval(slots[i], values[i]);
  return r;
}

MultiPoly MultiPoly::shift(int slot, const Rational& amount) const {
  if (amount == 0 || !depends_on(slot)) return *this;
  auto coeffs = coefficients_in(slot);
  MultiPoly lin = variable(nvars_, slot) + constant(nvars_, amount);
  MultiPoly r = coeffs.back();
  for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) r = r * lin + coeffs[k];
  return r;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(int slot) const {
  int d = degree(slot);
  if (d < 0) return {};
  std::vector<std::vector<Term>> parts(d + 1);
  for (const auto& t : terms_) {
    Monomial m = t.mono;
    int e = m[slot];
    m.set(slot, 0);
    parts[e].push_back({m, t.coef});
  }
  std::vector<MultiPoly> out;
  out.reserve(d + 1);
  for (auto& p : parts) out.emplace_back(nvars_, std::move(p));
  return out;
}

MultiPoly MultiPoly::from_coefficients(int nvars, int slot, const std::vector<MultiPoly>& coeffs) {
  std::vector<Term> out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (const auto& t : coeffs[k].terms_) {
      Monomial m = t.mono;
      m.set(slot, m[slot] + static_cast<int>(k));
      out.push_back({m, t.coef});
    }
  }
  return MultiPoly(nvars, std::move(out));
}

MultiPoly MultiPoly::leading_coefficient_in(int slot) const {
  int d = degree(slot);
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono[slot] == d) {
      Monomial m = t.mono;
      m.set(slot, 0);
      out.push_back({m, t.coef});
    }
  }
  return MultiPoly(nvars_, std::move(out));
}

MultiPoly MultiPoly::remap(int new_nvars, std::span<const int> slot_map) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (int s = 0; s < nslots(); ++s) {
      int e = t.mono[s];
      if (!e) continue;
      int target = slot_map[s];
      if (target < 0) throw InvalidInput("remap drops a variable that occurs");
      m.set(target, m[target] + e);
    }
    out.push_back({m, t.coef});
  }
  return MultiPoly(new_nvars, std::move(out));
}

std::pair<Rational, MultiPoly> MultiPoly::rational_content() const {
  if (is_zero()) return {Rational(0), *this};
  Integer l = 1, g = 0;
  for (const auto& t : terms_) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
  }
  Rational content(g, l);
  content.canonicalize();
  if (leading_coefficient() < 0) content = -content;
  MultiPoly prim(*this);
  for (auto& t : prim.terms_) t.coef /= content;
  return {content, prim};
}

MultiPoly MultiPoly::normalized() const { return rational_content().second; }

std::vector<std::string> MultiPoly::default_names(int nvars) {
  std::vector<std::string> names;
  for (int i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
  names.push_back("h");
  return names;
}

std::string MultiPoly::to_string() const {
  auto names = default_names(nvars_);
  return to_string(names);
}

std::string MultiPoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    bool negative = t.coef < 0;
    Rational mag = abs(t.coef);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (int s = 0; s < nslots(); ++s) {
      int e = t.mono[s];
      if (!e) continue;
      if (!mono.empty()) mono += "*";
      mono += names[s];
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

MultiPoly poly_arith(const MultiPoly& a, const MultiPoly& b, PolyOp op) {
  switch (op) {
    case PolyOp::add:
      return a + b;
    case PolyOp::sub:
      return a - b;
    case PolyOp::mul:
      return a * b;
    case PolyOp::exact_div:
      return a.exact_div(b);
  }
  throw InvalidInput("unknown polynomial operation");
}

Rational poly_eval(const MultiPoly& p, std::span<const Rational> point) { return p.eval(point); }

}  // namespace kd
