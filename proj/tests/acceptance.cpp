// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "kd/errors.hpp"
#include "kd/linear_algebra.hpp"
#include "kd/verify.hpp"
#include "support.hpp"

using namespace kd;
using kdtest::canon;
using kdtest::same_up_to_unit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

std::vector<Combination> of_kind(const std::vector<Combination>& all, CombinationKind k) {
  std::vector<Combination> out;
  for (const auto& c : all) {
    if (c.kind == k) out.push_back(c);
  }
  return out;
}

std::vector<Rational> table_alpha(const kdtest::Eq2& e, const std::vector<int>& a) {
  const char* table[] = {"z - y - 3", "2*z + y", "y", "x + y + z - 1"};
  std::vector<Rational> out(e.continuum.size());
  for (int i = 0; i < 4; ++i) out[e.index_of(table[i])] = a[i];
  return out;
}

void criterion1(Outcome& o) {
  const auto t0 = Clock::now();
  auto map = build_kahan_map(parse_ode(kdtest::kEq2));
  const double secs = seconds_since(t0);
  o.require(same_up_to_unit(map.common_den, canon(kdtest::kRefD1) * canon(kdtest::kRefD2)),
            "common_den == D1*D2");
  o.require(secs < 5, "runtime < 5 s");
  o.note << " map built in " << secs << " s";
}

void criterion2(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  RationalFunction expected(canon(kdtest::kRefK1) * canon(kdtest::kRefK2) * canon(kdtest::kRefK3) *
                                canon(kdtest::kRefK4),
                            canon(kdtest::kRefD1) * canon(kdtest::kRefD2).pow(4));
  auto ratio = e.J.J / expected;
  o.require(ratio.num().is_constant() && ratio.den().is_constant(), "J == K1K2K3K4/(D1 D2^4) up to unit");
  std::multiset<int> num_mult;
  std::multiset<int> den_mult;
  for (const auto& [f, m] : e.basis.numerator_factors) num_mult.insert(m);
  for (const auto& [f, m] : e.basis.denominator_factors) den_mult.insert(m);
  o.require(num_mult == std::multiset<int>{1, 1, 1, 1}, "numerator multiplicities (1,1,1,1)");
  o.require(den_mult == std::multiset<int>{1, 4}, "denominator multiplicities (1,4)");
  for (const char* k : {kdtest::kRefK1, kdtest::kRefK2, kdtest::kRefK3, kdtest::kRefK4}) {
    bool found = false;
    for (const auto& [f, m] : e.basis.numerator_factors) found = found || same_up_to_unit(f, canon(k));
    o.require(found, std::string("factor ") + k);
  }
}

void criterion3(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  o.require(e.affine.pairs.size() == 4, "exactly four pairs");
  const auto names = e.ode.slot_names();
  for (const char* p : {"z - y - 3", "2*z + y", "y", "x + y + z - 1"}) {
    int hits = 0;
    for (const auto& pair : e.affine.pairs) hits += same_up_to_unit(pair.P, kdtest::poly(e.ode, p));
    o.require(hits == 1, std::string("found ") + p);
  }
  o.note << " pairing:";
  for (const auto& pair : e.affine.pairs) {
    o.require(verify_dp_exact(e.map, e.basis, pair), "verify_dp_exact " + pair.P.to_string(names));
    o.note << " " << pair.P.to_string(names) << " <- ";
    std::string label;
    for (std::size_t i = 0; i < pair.cofactor.f.size(); ++i) {
      for (int k = 0; k < pair.cofactor.f[i]; ++k) label += (label.empty() ? "" : "*") + std::string("K") + std::to_string(i + 1);
    }
    std::string den;
    for (std::size_t j = 0; j < pair.cofactor.g.size(); ++j) {
      for (int k = 0; k < pair.cofactor.g[j]; ++k) den += (den.empty() ? "" : "*") + std::string("D") + std::to_string(j + 1);
    }
    o.note << label << "/(" << den << ");";
  }
}

void criterion4(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  const std::pair<const char*, const char*> expected[] = {
      {"z - y - 3", "z"}, {"2*z + y", "z - 3"}, {"y", "z - 1"}, {"x + y + z - 1", "z - 2"}};
  std::set<std::string> cbar;
  for (const auto& cp : e.continuum) cbar.insert(cp.Cbar.to_string(e.ode.slot_names()));
  o.require(cbar == std::set<std::string>{"z", "z - 1", "z - 2", "z - 3"}, "cofactor set {z, z-1, z-2, z-3}");
  for (const auto& [p, c] : expected) {
    const auto i = e.index_of(p);
    if (i >= e.continuum.size()) {
      o.require(false, std::string("pair for ") + p);
      continue;
    }
    o.require(e.continuum[i].Cbar == RationalFunction(kdtest::poly(e.ode, c)), std::string(p) + " <-> " + c);
    o.require(continuum_identity_holds(e.continuum[i], e.ode), std::string("identity for ") + p);
  }
}

void criterion5(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  auto fis = of_kind(find_combinations(e.continuum, e.ode), CombinationKind::FirstIntegral);
  o.require(fis.size() == 2, "two-dimensional first-integral space");
  RationalMatrix span;
  for (const auto& c : fis) {
    span.push_back(c.alpha);
    o.require(first_integral_certificate(c.expression, e.ode), "certificate of basis integral");
  }
  const std::pair<const char*, std::vector<int>> targets[] = {{"I1", {-1, 0, 2, -1}}, {"I2", {-1, -1, 1, 1}}};
  for (const auto& [name, alpha] : targets) {
    auto m = span;
    m.push_back(table_alpha(e, alpha));
    o.require(rank_over_Q(m) == 2, std::string(name) + " in span");
    ProductForm I;
    for (std::size_t i = 0; i < e.continuum.size(); ++i) {
      I.factors.push_back(e.continuum[i].Pbar);
      I.exponents.push_back(m.back()[i]);
    }
    o.require(first_integral_certificate(I, e.ode), std::string(name) + " certificate");
  }
}

void criterion6(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  const std::pair<std::vector<int>, int> diffs[] = {{{1, -1, 0, 0}, 3}, {{1, 0, -1, 0}, 1}, {{1, 0, 0, -1}, 2}};
  for (const auto& [alpha, rate] : diffs) {
    auto c = combined_cofactor(e.continuum, table_alpha(e, alpha));
    o.require(c == RationalFunction(MultiPoly::constant(3, rate)), "rate " + std::to_string(rate));
  }
  auto exps = of_kind(find_combinations(e.continuum, e.ode), CombinationKind::Exponential);
  std::set<std::string> rates;
  for (const auto& c : exps) rates.insert(to_string(abs(c.rate)));
  o.require(rates.count("3") && rates.count("1") && rates.count("2"), "reported rates include {3, 1, 2}");
}

void criterion7(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  std::vector<Rational> ones(4, Rational(1));
  auto ms = of_kind(find_combinations(e.continuum, e.ode), CombinationKind::Measure);
  o.require(ms.size() == 1 && ms[0].alpha == ones, "continuum measure alpha = (1,1,1,1)");
  o.require(combined_cofactor(e.continuum, ones) == RationalFunction(kdtest::poly(e.ode, "4*z - 6")), "sum = 4z - 6");
  o.require(RationalFunction(divergence(e.ode)) == RationalFunction(kdtest::poly(e.ode, "4*z - 6")), "div f = 4z - 6");
  RationalFunction prod(MultiPoly::constant(3, 1));
  for (const auto& p : e.affine.pairs) prod = prod * p.C;
  o.require(prod == e.J.J, "prod C_i == J");
  auto dm = of_kind(find_discrete_combinations(e.affine.pairs, e.basis, e.J), CombinationKind::Measure);
  o.require(dm.size() == 1 && dm[0].alpha == ones && dm[0].verified, "discrete measure found");
}

void criterion8(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  auto res = synthesize_solution(of_kind(find_combinations(e.continuum, e.ode), CombinationKind::Exponential),
                                 e.continuum, e.ode);
  if (!res.solution) {
    o.require(false, "synthesis: " + res.reason);
    return;
  }
  const auto x0 = kdtest::reference_solution(0, 1, 2, 3);
  auto k = res.solution->constants_for(std::span<const double>(x0));
  std::vector<double> times;
  for (int s = 0; s < 20; ++s) times.push_back(s / 19.0);
  const double residual = check_solution(e.ode, *res.solution, k, times).max_residual;
  double diff = 0;
  for (double t : times) {
    auto a = res.solution->eval(k, t);
    auto b = kdtest::reference_solution(t, 1, 2, 3);
    for (int i = 0; i < 3; ++i) diff = std::max(diff, std::fabs(a[i] - b[i]));
  }
  o.require(residual <= 1e-9, "residual <= 1e-9");
  o.require(diff <= 1e-10, "difference <= 1e-10");
  o.note << " residual " << residual << ", max difference " << diff;
}

void criterion9(Outcome& o) {
  const auto& e = kdtest::Eq2::get();
  auto P = [&](const char* s) { return kdtest::poly(e.ode, s); };
  ProductForm I1{{P("y"), P("z - y - 3"), P("x + y + z - 1")}, {2, -1, -1}};
  ProductForm I2{{P("y"), P("x + y + z - 1"), P("z - y - 3"), P("2*z + y")}, {1, 1, -1, -1}};
  const std::vector<double> x0{0.3, 0.4, 0.5};
  for (const auto& [name, I] : {std::pair{"I1", I1}, std::pair{"I2", I2}}) {
    auto sh = step_halving(e.ode, I, 0, x0, 1, 1e-3);
    o.require(sh.coarse.max_relative_drift <= 1e-8, std::string(name) + " drift <= 1e-8");
    o.require(sh.order_four(), std::string(name) + " halving ratio in [8, 32]");
    o.note << " " << name << " drift " << sh.coarse.max_relative_drift << " ratio " << sh.ratio << ";";
  }
}

void criterion10(Outcome& o) {
  RationalSampler rng(31337);
  int dps = 0;
  int continuum = 0;
  int budget = 0;
  bool ok_dp = true;
  bool ok_cont = true;
  bool ok_rev = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_int(0, 1));
    auto ode = kdtest::random_ode(rng, n);
    auto map = build_kahan_map(ode);
    ok_rev = ok_rev && check_time_symmetry(map, sample_points(n, 5, 100 + trial), Rational(1, 5)).holds;
    FactorBasis basis;
    try {
      basis = factor_basis(jacobian_determinant(map).J);
    } catch (const ResourceBudgetExceeded&) {
      ++budget;
      continue;
    }
    DarbouxOptions opt;
    opt.max_degree = n == 2 ? 2 : 1;
    opt.max_exp = 1;
    opt.max_candidates = 2000;
    for (const auto& p : search_all(map, basis, opt).pairs) {
      ++dps;
      ok_dp = ok_dp && verify_dp_exact(map, basis, p);
      if (p.cofactor.sign < 0) continue;
      ++continuum;
      ok_cont = ok_cont && continuum_identity_holds(continuum_limit(p, basis, ode), ode);
    }
  }
  o.require(ok_dp, "(a) DPs verify exactly");
  o.require(ok_cont, "(a) continuum identity");
  o.require(ok_rev, "(b) reversibility");
  o.note << " (a) " << dps << " DPs, " << continuum << " continuum pairs, " << budget << " budget skips;";

  RationalSampler frng(2024);
  bool ok_factor = true;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 0;
    auto p = kdtest::random_product(frng, n);
    ok_factor = ok_factor && factor_irreducible(p).expand(n) == p;
  }
  o.require(ok_factor, "(c) factor reconstruction");

  PipelineConfig c;
  c.ode_text = kdtest::kEq2;
  c.seed = 11;
  const auto a = emit_report(run_pipeline(c), ReportFormat::Json);
  const auto b = emit_report(run_pipeline(c), ReportFormat::Json);
  o.require(a == b, "(d) byte-identical JSON");
  o.require(emit_report(read_report(a), ReportFormat::Json) == a, "(d) JSON round trip");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"1 Kahan map denominator", criterion1},   {"2 Jacobian factorization", criterion2},
      {"3 affine Darboux polynomials", criterion3}, {"4 continuum cofactors", criterion4},
      {"5 first integrals", criterion5},          {"6 exponential rates", criterion6},
      {"7 preserved measure", criterion7},         {"8 closed-form solution", criterion8},
      {"9 numeric conservation", criterion9},      {"10 property suites", criterion10},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      fn(o);
    } catch (const std::exception& ex) {
      o.pass = false;
      o.note << " [exception: " << ex.what() << "]";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << " (" << seconds_since(t0) << " s)"
              << o.note.str() << "\n";
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << (10 - failures) << "/10\n";
  return failures ? 1 : 0;
}
