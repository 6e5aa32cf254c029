#include "kd/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "kd/errors.hpp"
#include "kd/expr_parser.hpp"

namespace kd {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kDriftTolerance = 1e-8;
constexpr double kResidualTolerance = 1e-9;
constexpr double kStep = 1e-3;
constexpr double kHorizon = 1.0;
constexpr std::size_t kMapPoints = 5;
constexpr int kSolutionTimes = 20;

std::vector<Rational> map_check_hs() { return {make_rational(1, 7), make_rational(1, 13)}; }

const char* stage_key(Stage s) {
  switch (s) {
    case Stage::Kahan: return "kahan";
    case Stage::Factor: return "factor";
    case Stage::Darboux: return "darboux";
    case Stage::Structure: return "structure";
  }
  return "structure";
}

Stage stage_from_key(const std::string& s) {
  if (s == "kahan") return Stage::Kahan;
  if (s == "factor") return Stage::Factor;
  if (s == "darboux") return Stage::Darboux;
  if (s == "structure") return Stage::Structure;
  throw InvalidInput("unknown stage '" + s + "'");
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DegreeTooHigh*>(&e)) return "DegreeTooHigh";
  if (dynamic_cast<const UnknownVariable*>(&e)) return "UnknownVariable";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ResourceBudgetExceeded*>(&e)) return "ResourceBudgetExceeded";
  if (dynamic_cast<const DegenerateMap*>(&e)) return "DegenerateMap";
  if (dynamic_cast<const NoContinuumLimit*>(&e)) return "NoContinuumLimit";
  if (dynamic_cast<const LimitInconsistent*>(&e)) return "LimitInconsistent";
  if (dynamic_cast<const DenominatorBlowup*>(&e)) return "DenominatorBlowup";
  if (dynamic_cast<const NotDivisible*>(&e)) return "NotDivisible";
  if (dynamic_cast<const InvalidInput*>(&e)) return "InvalidInput";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

int error_exit_code(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const ResourceBudgetExceeded*>(&e)) return 3;
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open ODE file '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> state_names(const StructureReport& r) {
  return r.ode ? r.ode->names() : std::vector<std::string>{};
}

std::vector<std::string> slot_names(const StructureReport& r) {
  if (r.ode) return r.ode->slot_names();
  return {"h"};
}

std::map<std::string, int> slot_map(const std::vector<std::string>& names) {
  std::map<std::string, int> m;
  for (std::size_t i = 0; i < names.size(); ++i) m[names[i]] = static_cast<int>(i);
  return m;
}

std::string fmt_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(3) << std::scientific << v;
  return ss.str();
}

std::string fmt_seconds(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << v;
  return ss.str();
}

// Claim names shared by verification entries and certificates.
std::string combination_claim(const Combination& c, std::size_t index) {
  std::string level = c.level == CombinationLevel::Continuum ? "" : "discrete_";
  return level + kind_name(c.kind) + "[" + std::to_string(index) + "]";
}

const VerificationEntry* find_entry(const StructureReport& r, const std::string& claim) {
  for (const auto& e : r.verification) {
    if (e.claim == claim) return &e;
  }
  return nullptr;
}

Certificate combination_certificate(const StructureReport& r, const Combination& c, std::size_t index) {
  if (c.verified) return Certificate::Symbolic;
  const auto* e = find_entry(r, combination_claim(c, index));
  if (e && e->passed && !e->skipped) return Certificate::Numeric;
  return Certificate::Unverified;
}

Certificate solution_certificate(const StructureReport& r) {
  const auto* e = find_entry(r, "solution");
  if (e && e->passed && !e->skipped) return Certificate::Numeric;
  return Certificate::Unverified;
}

// Index of each combination within its kind, in report order.
std::vector<std::size_t> kind_indices(const std::vector<Combination>& list) {
  std::map<CombinationKind, std::size_t> counter;
  std::vector<std::size_t> out;
  for (const auto& c : list) out.push_back(counter[c.kind]++);
  return out;
}

std::string cofactor_text(const FactorBasis& basis, const CofactorCandidate& cand) {
  std::string num;
  std::string den;
  int den_terms = 0;
  auto append = [](std::string& s, const std::string& label, int e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += label;
    if (e > 1) s += "^" + std::to_string(e);
  };
  for (std::size_t i = 0; i < cand.f.size() && i < basis.numerator_factors.size(); ++i) {
    append(num, "K" + std::to_string(i + 1), cand.f[i]);
  }
  for (std::size_t j = 0; j < cand.g.size() && j < basis.denominator_factors.size(); ++j) {
    if (cand.g[j] != 0) ++den_terms;
    append(den, "D" + std::to_string(j + 1), cand.g[j]);
  }
  if (num.empty()) num = "1";
  std::string out = cand.sign < 0 ? "-" + num : num;
  if (!den.empty()) out += den_terms > 1 ? "/(" + den + ")" : "/" + den;
  return out;
}

// JSON helpers.

Json rf_json(const RationalFunction& f, std::span<const std::string> names) {
  Json j;
  j["num"] = f.num().to_string(names);
  j["den"] = f.den().to_string(names);
  return j;
}

Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

std::vector<Rational> rationals_from(const Json& a) {
  std::vector<Rational> v;
  for (const auto& s : a) v.push_back(parse_rational(s.get<std::string>()));
  return v;
}

struct Reader {
  std::map<std::string, int> slots;
  int nvars = 0;

  MultiPoly poly(const Json& j) const { return parse_polynomial(j.get<std::string>(), slots, nvars); }
  RationalFunction rf(const Json& j) const { return RationalFunction::from_coprime(poly(j.at("num")), poly(j.at("den"))); }
};

Json factor_list_json(const FactorList& list, std::span<const std::string> names, const char* prefix) {
  Json a = Json::array();
  for (std::size_t i = 0; i < list.size(); ++i) {
    Json f;
    f["label"] = std::string(prefix) + std::to_string(i + 1);
    f["factor"] = list[i].first.to_string(names);
    f["multiplicity"] = list[i].second;
    a.push_back(std::move(f));
  }
  return a;
}

FactorList factor_list_from(const Json& a, const Reader& rd) {
  FactorList list;
  for (const auto& f : a) list.emplace_back(rd.poly(f.at("factor")), f.at("multiplicity").get<int>());
  return list;
}

Json combination_json(const StructureReport& r, const Combination& c, std::size_t index,
                      std::span<const std::string> names) {
  Json j;
  j["kind"] = kind_name(c.kind);
  j["level"] = c.level == CombinationLevel::Continuum ? "continuum" : "discrete";
  j["alpha"] = rationals_json(c.alpha);
  if (c.kind == CombinationKind::Exponential) j["rate"] = to_string(c.rate);
  j["expression"] = c.expression.to_string(names);
  Json factors = Json::array();
  for (const auto& f : c.expression.factors) factors.push_back(f.to_string(names));
  j["factors"] = std::move(factors);
  j["exponents"] = rationals_json(c.expression.exponents);
  j["symbolic"] = c.verified;
  j["certificate"] = certificate_name(combination_certificate(r, c, index));
  return j;
}

Combination combination_from(const Json& j, const Reader& rd) {
  Combination c;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == kind_name(CombinationKind::FirstIntegral)) {
    c.kind = CombinationKind::FirstIntegral;
  } else if (kind == kind_name(CombinationKind::Exponential)) {
    c.kind = CombinationKind::Exponential;
  } else if (kind == kind_name(CombinationKind::Measure)) {
    c.kind = CombinationKind::Measure;
  } else {
    throw InvalidInput("unknown combination kind '" + kind + "'");
  }
  c.level = j.at("level").get<std::string>() == "discrete" ? CombinationLevel::Discrete : CombinationLevel::Continuum;
  c.alpha = rationals_from(j.at("alpha"));
  if (j.contains("rate")) c.rate = parse_rational(j.at("rate").get<std::string>());
  for (const auto& f : j.at("factors")) c.expression.factors.push_back(rd.poly(f));
  c.expression.exponents = rationals_from(j.at("exponents"));
  c.verified = j.at("symbolic").get<bool>();
  return c;
}

Json combination_list_json(const StructureReport& r, const std::vector<Combination>& list, CombinationKind kind,
                           std::span<const std::string> names) {
  Json a = Json::array();
  const auto idx = kind_indices(list);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].kind == kind) a.push_back(combination_json(r, list[i], idx[i], names));
  }
  return a;
}

Json all_combinations_json(const StructureReport& r, const std::vector<Combination>& list,
                           std::span<const std::string> names) {
  Json a = Json::array();
  const auto idx = kind_indices(list);
  for (std::size_t i = 0; i < list.size(); ++i) a.push_back(combination_json(r, list[i], idx[i], names));
  return a;
}

// Text helpers.

void text_combinations(std::ostringstream& out, const StructureReport& r, const std::vector<Combination>& list,
                       std::span<const std::string> names, const char* title) {
  out << title << ":\n";
  if (list.empty()) {
    out << "  (none)\n";
    return;
  }
  const auto idx = kind_indices(list);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& c = list[i];
    out << "  " << kind_name(c.kind) << " [" << certificate_name(combination_certificate(r, c, idx[i])) << "]\n";
    out << "    alpha = (";
    for (std::size_t k = 0; k < c.alpha.size(); ++k) out << (k ? ", " : "") << to_string(c.alpha[k]);
    out << ")\n";
    if (c.kind == CombinationKind::Exponential) {
      out << "    " << c.expression.to_string(names) << " = k*exp(" << (c.rate == 1 ? std::string("t") : to_string(c.rate) + "*t") << ")\n";
    } else {
      out << "    " << c.expression.to_string(names) << "\n";
    }
  }
}

void check_trajectory(StructureReport& report, const Combination& c, std::size_t index,
                      const std::vector<double>& x0) {
  VerificationEntry e;
  e.claim = combination_claim(c, index);
  try {
    const Rational rate = c.kind == CombinationKind::Exponential ? c.rate : Rational(0);
    auto sh = step_halving(*report.ode, c.expression, rate, x0, kHorizon, kStep);
    e.observed = sh.coarse.max_relative_drift;
    const bool at_roundoff = sh.fine.max_relative_drift < 1e-14;
    e.passed = e.observed <= kDriftTolerance && (sh.order_four() || at_roundoff);
    std::ostringstream d;
    d << "RK4 step " << kStep << " over T = " << kHorizon << ": drift " << fmt_double(sh.coarse.max_relative_drift)
      << ", halved " << fmt_double(sh.fine.max_relative_drift) << ", ratio " << std::fixed << std::setprecision(2)
      << sh.ratio;
    e.detail = d.str();
  } catch (const DenominatorBlowup& ex) {
    e.skipped = true;
    e.passed = true;
    std::ostringstream d;
    d << ex.what() << " at t = " << ex.time();
    e.detail = d.str();
  } catch (const InvalidInput& ex) {
    e.skipped = true;
    e.passed = true;
    e.detail = ex.what();
  }
  report.verification.push_back(std::move(e));
}

}  // namespace

std::string certificate_name(Certificate c) {
  switch (c) {
    case Certificate::Symbolic: return "symbolically-verified";
    case Certificate::Numeric: return "numerically-verified";
    case Certificate::Unverified: return "unverified";
  }
  return "unverified";
}

void PipelineConfig::validate() const {
  if (max_dp_degree < 1) throw InvalidInput("max_dp_degree must be at least 1");
  if (max_exp < 1) throw InvalidInput("max_exp must be at least 1");
  if (candidate_cap < 1) throw InvalidInput("candidate_cap must be at least 1");
  if (ode_text.empty() && ode_path.empty()) throw InvalidInput("no ODE input given");
}

int StructureReport::exit_code() const {
  if (!errors.empty()) return errors.front().exit_code;
  if (verification_ran) {
    for (const auto& e : verification) {
      if (!e.passed && !e.skipped) return 4;
    }
  }
  return 0;
}

std::vector<DarbouxPair> irreducible_pairs(const DarbouxSearch& search) {
  std::vector<DarbouxPair> out;
  for (const auto& p : search.pairs) {
    if (!p.reducible) out.push_back(p);
  }
  return out;
}

std::vector<double> default_initial_point(int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = 0.3 + 0.1 * i;
  return x;
}

StructureReport run_pipeline(const PipelineConfig& config) {
  StructureReport rep;
  rep.config = config;
  auto stage = [&](const std::string& name, auto&& body) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    try {
      body();
    } catch (const std::exception& e) {
      rep.errors.push_back({name, error_kind(e), e.what(), error_exit_code(e)});
      ok = false;
    }
    rep.timing_seconds[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ok;
  };

  if (!stage("parse", [&] {
        config.validate();
        rep.ode = parse_ode_any(config.ode_text.empty() ? read_file(config.ode_path) : config.ode_text);
      })) {
    return rep;
  }

  if (!stage("kahan", [&] {
        rep.map = build_kahan_map(*rep.ode);
        rep.jacobian = jacobian_determinant(*rep.map);
      })) {
    return rep;
  }
  if (config.last_stage == Stage::Kahan) return rep;

  if (!stage("factor", [&] { rep.basis = factor_basis(rep.jacobian->J); })) return rep;
  if (config.last_stage == Stage::Factor) return rep;

  if (!stage("darboux", [&] {
        DarbouxOptions opt;
        opt.max_degree = config.max_dp_degree;
        opt.max_exp = config.max_exp;
        opt.max_candidates = config.candidate_cap;
        opt.prune = config.prune;
        opt.seed ^= config.seed;
        rep.search = search_all(*rep.map, *rep.basis, opt);
      })) {
    return rep;
  }
  if (config.last_stage == Stage::Darboux) return rep;

  stage("structure", [&] {
    const auto& ode = *rep.ode;
    const auto& names = ode.slot_names();
    for (std::size_t i = 0; i < rep.search->pairs.size(); ++i) {
      const auto& pair = rep.search->pairs[i];
      if (pair.reducible) continue;
      try {
        auto cp = continuum_limit(pair, *rep.basis, ode);
        cp.source = i;
        rep.continuum.push_back(std::move(cp));
      } catch (const Error& e) {
        rep.continuum_notes.push_back(pair.P.to_string(names) + ": " + error_kind(e) + ": " + e.what());
      }
    }
    rep.combinations = find_combinations(rep.continuum, ode);
    rep.discrete_combinations = find_discrete_combinations(irreducible_pairs(*rep.search), *rep.basis, *rep.jacobian);

    std::vector<std::vector<Rational>> fi_basis;
    std::vector<Combination> exps;
    for (const auto& c : rep.combinations) {
      if (c.kind == CombinationKind::FirstIntegral) fi_basis.push_back(c.alpha);
      if (c.kind == CombinationKind::Exponential) exps.push_back(c);
    }
    for (const auto& alpha : small_lattice_vectors(fi_basis)) {
      Combination c;
      c.kind = CombinationKind::FirstIntegral;
      c.alpha = alpha;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0) continue;
        c.expression.factors.push_back(rep.continuum[i].Pbar);
        c.expression.exponents.push_back(alpha[i]);
      }
      c.verified = combined_cofactor(rep.continuum, alpha).is_zero() &&
                   first_integral_certificate(c.expression, ode);
      rep.small_first_integrals.push_back(std::move(c));
    }

    auto synth = synthesize_solution(exps, rep.continuum, ode);
    rep.solution = std::move(synth.solution);
    rep.solution_note = synth.reason;
  });

  if (config.verify) stage("verify", [&] { run_verification(rep); });
  return rep;
}

void run_verification(StructureReport& report) {
  report.verification.clear();
  report.verification_ran = true;
  if (!report.ode) return;
  const auto& ode = *report.ode;
  const int n = ode.dimension();

  if (report.map && report.search) {
    const auto points = sample_points(n, kMapPoints, report.config.seed);
    for (std::size_t i = 0; i < report.search->pairs.size(); ++i) {
      auto r = check_map_dp(*report.map, report.search->pairs[i], points, map_check_hs());
      VerificationEntry e;
      e.claim = "darboux[" + std::to_string(i) + "]";
      e.passed = r.holds;
      e.skipped = r.checked == 0;
      e.observed = static_cast<double>(r.checked);
      e.detail = "P(phi(x)) = C(x) P(x) exactly at " + std::to_string(r.checked) + " samples, " +
                 std::to_string(r.skipped) + " singular";
      report.verification.push_back(std::move(e));
    }
  }

  const auto x0 = default_initial_point(n);
  const auto idx = kind_indices(report.combinations);
  for (std::size_t i = 0; i < report.combinations.size(); ++i) {
    const auto& c = report.combinations[i];
    if (c.kind == CombinationKind::Measure) continue;
    check_trajectory(report, c, idx[i], x0);
  }

  if (report.solution) {
    VerificationEntry e;
    e.claim = "solution";
    std::vector<double> k;
    try {
      k = report.solution->constants_for(std::span<const double>(x0));
    } catch (const Error& ex) {
      e.skipped = true;
      e.passed = true;
      e.detail = ex.what();
    }
    if (!e.skipped) {
      std::vector<double> times;
      for (int s = 0; s < kSolutionTimes; ++s) times.push_back(static_cast<double>(s) / (kSolutionTimes - 1));
      auto r = check_solution(ode, *report.solution, k, times);
      e.observed = r.max_residual;
      e.passed = r.max_residual <= kResidualTolerance;
      e.detail = "max |dx/dt - f(x)| over " + std::to_string(times.size() - r.singular_times.size()) +
                 " times in [0, 1], " + std::to_string(r.singular_times.size()) + " singular";
    }
    report.verification.push_back(std::move(e));
  }
}

std::string emit_report(const StructureReport& r, ReportFormat format) {
  const auto names = slot_names(r);
  const auto xnames = state_names(r);

  if (format == ReportFormat::Json) {
    Json j;
    j["schema"] = 1;
    Json cfg;
    cfg["ode_path"] = r.config.ode_path;
    cfg["max_dp_degree"] = r.config.max_dp_degree;
    cfg["max_exp"] = r.config.max_exp;
    cfg["candidate_cap"] = r.config.candidate_cap;
    cfg["prune"] = r.config.prune;
    cfg["seed"] = r.config.seed;
    cfg["verify"] = r.config.verify;
    cfg["last_stage"] = stage_key(r.config.last_stage);
    j["config"] = std::move(cfg);

    if (r.ode) {
      Json o;
      Json vars = Json::array();
      for (int i = 0; i < r.ode->dimension(); ++i) {
        Json v;
        v["name"] = xnames[i];
        v["index"] = "x" + std::to_string(i + 1);
        vars.push_back(std::move(v));
      }
      o["variables"] = std::move(vars);
      Json eqs = Json::array();
      for (const auto& f : rhs(*r.ode)) eqs.push_back(f.to_string(names));
      o["rhs"] = std::move(eqs);
      j["ode"] = std::move(o);
    } else {
      j["ode"] = nullptr;
    }

    if (r.map) {
      Json m;
      Json nums = Json::array();
      for (const auto& p : r.map->numerators) nums.push_back(p.to_string(names));
      m["numerators"] = std::move(nums);
      m["denominator"] = r.map->common_den.to_string(names);
      j["kahan"] = std::move(m);
    } else {
      j["kahan"] = nullptr;
    }
    j["jacobian"] = r.jacobian ? rf_json(r.jacobian->J, names) : Json(nullptr);

    if (r.basis) {
      Json b;
      b["unit"] = to_string(r.basis->unit);
      b["numerator"] = factor_list_json(r.basis->numerator_factors, names, "K");
      b["denominator"] = factor_list_json(r.basis->denominator_factors, names, "D");
      j["factor_basis"] = std::move(b);
    } else {
      j["factor_basis"] = nullptr;
    }

    if (r.search) {
      Json d;
      d["candidates"] = r.search->candidates;
      d["pruned"] = r.search->pruned;
      d["solved"] = r.search->solved;
      d["truncated"] = r.search->truncated;
      d["notes"] = r.search->notes;
      Json pairs = Json::array();
      for (const auto& p : r.search->pairs) {
        Json e;
        e["P"] = p.P.to_string(names);
        e["sign"] = p.cofactor.sign;
        e["f"] = p.cofactor.f;
        e["g"] = p.cofactor.g;
        e["cofactor"] = r.basis ? cofactor_text(*r.basis, p.cofactor) : "";
        e["C"] = rf_json(p.C, names);
        e["degree"] = p.degree;
        e["reducible"] = p.reducible;
        e["candidate_index"] = p.candidate_index;
        e["certificate"] = certificate_name(Certificate::Symbolic);
        pairs.push_back(std::move(e));
      }
      d["pairs"] = std::move(pairs);
      j["darboux"] = std::move(d);
    } else {
      j["darboux"] = nullptr;
    }

    const bool structure_ran = r.search && r.config.last_stage == Stage::Structure &&
                               std::none_of(r.errors.begin(), r.errors.end(),
                                            [](const StageError& e) { return e.stage == "structure"; });
    if (structure_ran) {
      Json s;
      Json pairs = Json::array();
      for (const auto& cp : r.continuum) {
        Json e;
        e["Pbar"] = cp.Pbar.to_string(names);
        e["Cbar"] = rf_json(cp.Cbar, names);
        e["source"] = cp.source;
        e["certificate"] = certificate_name(Certificate::Symbolic);
        pairs.push_back(std::move(e));
      }
      s["pairs"] = std::move(pairs);
      s["notes"] = r.continuum_notes;
      s["first_integrals"] = combination_list_json(r, r.combinations, CombinationKind::FirstIntegral, names);
      s["exponentials"] = combination_list_json(r, r.combinations, CombinationKind::Exponential, names);
      Json measures;
      measures["continuum"] = combination_list_json(r, r.combinations, CombinationKind::Measure, names);
      measures["discrete"] = combination_list_json(r, r.discrete_combinations, CombinationKind::Measure, names);
      s["measures"] = std::move(measures);
      s["discrete_integrals"] =
          combination_list_json(r, r.discrete_combinations, CombinationKind::FirstIntegral, names);
      s["small_first_integrals"] = all_combinations_json(r, r.small_first_integrals, names);
      j["structure"] = std::move(s);
    } else {
      j["structure"] = nullptr;
    }

    if (r.solution) {
      const auto& sol = *r.solution;
      Json o;
      o["symbols"] = sol.symbol_names;
      o["symbol_nvars"] = sol.symbol_nvars;
      Json rel = Json::array();
      for (const auto& rr : sol.relations) {
        Json e;
        e["alpha"] = rationals_json(rr.alpha);
        e["rate"] = to_string(rr.rate);
        e["numerator"] = rr.numerator.to_string(names);
        e["denominator"] = rr.denominator.to_string(names);
        rel.push_back(std::move(e));
      }
      o["relations"] = std::move(rel);
      Json xs = Json::array();
      for (std::size_t i = 0; i < sol.x.size(); ++i) {
        Json e = rf_json(sol.x[i], sol.symbol_names);
        e = Json{{"variable", xnames[i]}, {"num", e["num"]}, {"den", e["den"]}};
        xs.push_back(std::move(e));
      }
      o["x"] = std::move(xs);
      o["certificate"] = certificate_name(solution_certificate(r));
      j["solution"] = std::move(o);
    } else {
      j["solution"] = nullptr;
    }
    j["solution_note"] = r.solution_note;

    Json v;
    v["ran"] = r.verification_ran;
    if (r.verification_ran && r.ode) {
      Json sampling;
      sampling["seed"] = r.config.seed;
      sampling["map_points"] = kMapPoints;
      sampling["h_values"] = rationals_json(map_check_hs());
      sampling["initial_point"] = default_initial_point(r.ode->dimension());
      sampling["step"] = kStep;
      sampling["horizon"] = kHorizon;
      v["sampling"] = std::move(sampling);
    }
    Json entries = Json::array();
    for (const auto& e : r.verification) {
      Json o;
      o["claim"] = e.claim;
      o["passed"] = e.passed;
      o["skipped"] = e.skipped;
      o["observed"] = std::isfinite(e.observed) ? e.observed : 0.0;
      o["detail"] = e.detail;
      entries.push_back(std::move(o));
    }
    v["entries"] = std::move(entries);
    j["verification"] = std::move(v);

    Json errs = Json::array();
    for (const auto& e : r.errors) {
      errs.push_back(Json{{"stage", e.stage}, {"kind", e.kind}, {"message", e.message}, {"exit_code", e.exit_code}});
    }
    j["errors"] = std::move(errs);
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "kahan-darboux report\n";
  out << "config: max_degree=" << r.config.max_dp_degree << " max_exp=" << r.config.max_exp
      << " candidate_cap=" << r.config.candidate_cap << " prune=" << (r.config.prune ? "yes" : "no")
      << " seed=" << r.config.seed << "\n\n";
  if (r.ode) {
    out << "ODE:\n";
    std::istringstream lines(print_ode(*r.ode));
    for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
    out << "  variables:";
    for (int i = 0; i < r.ode->dimension(); ++i) out << " " << xnames[i] << "=x" << i + 1;
    out << "\n\n";
  }
  if (r.map) {
    out << "Kahan map (x~ = N / D):\n";
    out << "  D = " << r.map->common_den.to_string(names) << "\n";
    for (int i = 0; i < r.map->n; ++i) {
      out << "  N_" << xnames[i] << " = " << r.map->numerators[i].to_string(names) << "\n";
    }
    out << "\n";
  }
  if (r.jacobian) {
    out << "Jacobian determinant:\n";
    out << "  J = (" << r.jacobian->J.num().to_string(names) << ") / (" << r.jacobian->J.den().to_string(names)
        << ")\n\n";
  }
  if (r.basis) {
    out << "Factor basis: J = " << to_string(r.basis->unit);
    for (std::size_t i = 0; i < r.basis->numerator_factors.size(); ++i) {
      out << " * K" << i + 1;
      if (r.basis->numerator_factors[i].second > 1) out << "^" << r.basis->numerator_factors[i].second;
    }
    for (std::size_t i = 0; i < r.basis->denominator_factors.size(); ++i) {
      out << " / D" << i + 1;
      if (r.basis->denominator_factors[i].second > 1) out << "^" << r.basis->denominator_factors[i].second;
    }
    out << "\n";
    for (std::size_t i = 0; i < r.basis->numerator_factors.size(); ++i) {
      out << "  K" << i + 1 << " = " << r.basis->numerator_factors[i].first.to_string(names) << "\n";
    }
    for (std::size_t i = 0; i < r.basis->denominator_factors.size(); ++i) {
      out << "  D" << i + 1 << " = " << r.basis->denominator_factors[i].first.to_string(names) << "\n";
    }
    out << "\n";
  }
  if (r.search) {
    const auto& s = *r.search;
    out << "Darboux polynomials (" << s.candidates << " candidates, " << s.pruned << " pruned, " << s.solved
        << " solved" << (s.truncated ? ", truncated" : "") << "):\n";
    if (s.pairs.empty()) out << "  (none)\n";
    for (std::size_t i = 0; i < s.pairs.size(); ++i) {
      const auto& p = s.pairs[i];
      out << "  [" << i + 1 << "] P = " << p.P.to_string(names) << "\n";
      out << "      C = " << (r.basis ? cofactor_text(*r.basis, p.cofactor) : "?") << "  (degree " << p.degree << ", "
          << (p.reducible ? "reducible" : "irreducible") << ", " << certificate_name(Certificate::Symbolic) << ")\n";
    }
    for (const auto& note : s.notes) out << "  note: " << note << "\n";
    out << "\n";
  }
  if (!r.continuum.empty() || !r.continuum_notes.empty()) {
    out << "Continuum limits (grad(Pbar) . f = Cbar Pbar):\n";
    for (const auto& cp : r.continuum) {
      out << "  Pbar = " << cp.Pbar.to_string(names) << "    Cbar = " << cp.Cbar.to_string(names) << "\n";
    }
    for (const auto& note : r.continuum_notes) out << "  note: " << note << "\n";
    out << "\n";
  }
  const bool structure_ran = r.search && r.config.last_stage == Stage::Structure &&
                             std::none_of(r.errors.begin(), r.errors.end(),
                                          [](const StageError& e) { return e.stage == "structure"; });
  if (structure_ran) {
    std::vector<Combination> fis;
    std::vector<Combination> exps;
    std::vector<Combination> measures;
    for (const auto& c : r.combinations) {
      (c.kind == CombinationKind::FirstIntegral ? fis : c.kind == CombinationKind::Exponential ? exps : measures)
          .push_back(c);
    }
    text_combinations(out, r, r.combinations, names, "Continuum combinations");
    out << "\n";
    text_combinations(out, r, r.small_first_integrals, names, "Small first-integral forms");
    out << "\n";
    text_combinations(out, r, r.discrete_combinations, names, "Map-level combinations");
    out << "\n";
    out << "Summary: " << fis.size() << " first integrals, " << exps.size() << " exponential relations, "
        << measures.size() << " continuum measures\n\n";
  }
  if (r.solution) {
    const auto& sol = *r.solution;
    out << "Closed-form solution [" << certificate_name(solution_certificate(r)) << "]:\n";
    for (std::size_t m = 0; m < sol.relations.size(); ++m) {
      const auto& rel = sol.relations[m];
      out << "  " << sol.symbol_names[2 * m] << " = (" << rel.numerator.to_string(names) << ") / ("
          << rel.denominator.to_string(names) << ") at t = 0,  " << sol.symbol_names[2 * m + 1] << " = exp("
          << to_string(rel.rate) << "*t)\n";
    }
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
      out << "  " << xnames[i] << "(t) = " << sol.x[i].to_string(sol.symbol_names) << "\n";
    }
    out << "\n";
  } else if (!r.solution_note.empty()) {
    out << "Closed-form solution: not found (" << r.solution_note << ")\n\n";
  }
  if (r.verification_ran) {
    out << "Verification:\n";
    for (const auto& e : r.verification) {
      out << "  " << (e.skipped ? "SKIP" : e.passed ? "PASS" : "FAIL") << "  " << e.claim << "  observed "
          << fmt_double(e.observed) << "  " << e.detail << "\n";
    }
    out << "\n";
  }
  if (!r.errors.empty()) {
    out << "Errors:\n";
    for (const auto& e : r.errors) {
      out << "  [" << e.stage << "] " << e.kind << ": " << e.message << " (exit " << e.exit_code << ")\n";
    }
    out << "\n";
  }
  if (!r.timing_seconds.empty()) {
    out << "Timing (s):";
    for (const auto& [name, secs] : r.timing_seconds) out << " " << name << "=" << fmt_seconds(secs);
    out << "\n";
  }
  return out.str();
}

StructureReport read_report(const std::string& json_text) {
  const Json j = Json::parse(json_text);
  if (j.at("schema").get<int>() != 1) throw InvalidInput("unsupported report schema");
  StructureReport r;
  const auto& cfg = j.at("config");
  r.config.ode_path = cfg.at("ode_path").get<std::string>();
  r.config.max_dp_degree = cfg.at("max_dp_degree").get<int>();
  r.config.max_exp = cfg.at("max_exp").get<int>();
  r.config.candidate_cap = cfg.at("candidate_cap").get<std::size_t>();
  r.config.prune = cfg.at("prune").get<bool>();
  r.config.seed = cfg.at("seed").get<std::uint64_t>();
  r.config.verify = cfg.at("verify").get<bool>();
  r.config.last_stage = stage_from_key(cfg.at("last_stage").get<std::string>());
  r.config.format = ReportFormat::Json;

  Reader rd;
  if (!j.at("ode").is_null()) {
    const auto& o = j.at("ode");
    std::vector<std::string> xn;
    for (const auto& v : o.at("variables")) xn.push_back(v.at("name").get<std::string>());
    std::string text;
    for (std::size_t i = 0; i < xn.size(); ++i) text += xn[i] + "' = " + o.at("rhs").at(i).get<std::string>() + "\n";
    r.ode = parse_ode(text);
    rd.slots = slot_map(r.ode->slot_names());
    rd.nvars = r.ode->dimension();
  } else {
    rd.slots = slot_map({"h"});
  }

  if (!j.at("kahan").is_null()) {
    const auto& m = j.at("kahan");
    BirationalMap map;
    map.n = rd.nvars;
    for (const auto& p : m.at("numerators")) map.numerators.push_back(rd.poly(p));
    map.common_den = rd.poly(m.at("denominator"));
    if (r.ode) map.source = *r.ode;
    r.map = std::move(map);
  }
  if (!j.at("jacobian").is_null()) r.jacobian = JacobianData{rd.rf(j.at("jacobian"))};
  if (!j.at("factor_basis").is_null()) {
    const auto& b = j.at("factor_basis");
    FactorBasis basis;
    basis.unit = parse_rational(b.at("unit").get<std::string>());
    basis.numerator_factors = factor_list_from(b.at("numerator"), rd);
    basis.denominator_factors = factor_list_from(b.at("denominator"), rd);
    r.basis = std::move(basis);
  }
  if (!j.at("darboux").is_null()) {
    const auto& d = j.at("darboux");
    DarbouxSearch s;
    s.candidates = d.at("candidates").get<std::size_t>();
    s.pruned = d.at("pruned").get<std::size_t>();
    s.solved = d.at("solved").get<std::size_t>();
    s.truncated = d.at("truncated").get<bool>();
    s.notes = d.at("notes").get<std::vector<std::string>>();
    for (const auto& e : d.at("pairs")) {
      DarbouxPair p;
      p.P = rd.poly(e.at("P"));
      p.cofactor.sign = e.at("sign").get<int>();
      p.cofactor.f = e.at("f").get<std::vector<int>>();
      p.cofactor.g = e.at("g").get<std::vector<int>>();
      p.C = rd.rf(e.at("C"));
      p.degree = e.at("degree").get<int>();
      p.reducible = e.at("reducible").get<bool>();
      p.candidate_index = e.at("candidate_index").get<std::size_t>();
      s.pairs.push_back(std::move(p));
    }
    r.search = std::move(s);
  }
  if (!j.at("structure").is_null()) {
    const auto& s = j.at("structure");
    for (const auto& e : s.at("pairs")) {
      ContinuumPair cp;
      cp.Pbar = rd.poly(e.at("Pbar"));
      cp.Cbar = rd.rf(e.at("Cbar"));
      cp.source = e.at("source").get<std::size_t>();
      r.continuum.push_back(std::move(cp));
    }
    r.continuum_notes = s.at("notes").get<std::vector<std::string>>();
    for (const char* key : {"first_integrals", "exponentials"}) {
      for (const auto& c : s.at(key)) r.combinations.push_back(combination_from(c, rd));
    }
    for (const auto& c : s.at("measures").at("continuum")) r.combinations.push_back(combination_from(c, rd));
    for (const auto& c : s.at("discrete_integrals")) r.discrete_combinations.push_back(combination_from(c, rd));
    for (const auto& c : s.at("measures").at("discrete")) r.discrete_combinations.push_back(combination_from(c, rd));
    for (const auto& c : s.at("small_first_integrals")) r.small_first_integrals.push_back(combination_from(c, rd));
  }
  if (!j.at("solution").is_null()) {
    const auto& o = j.at("solution");
    ClosedFormSolution sol;
    sol.symbol_names = o.at("symbols").get<std::vector<std::string>>();
    sol.symbol_nvars = o.at("symbol_nvars").get<int>();
    for (const auto& e : o.at("relations")) {
      ClosedFormSolution::Relation rel;
      rel.alpha = rationals_from(e.at("alpha"));
      rel.rate = parse_rational(e.at("rate").get<std::string>());
      rel.numerator = rd.poly(e.at("numerator"));
      rel.denominator = rd.poly(e.at("denominator"));
      sol.relations.push_back(std::move(rel));
    }
    Reader sr{slot_map(sol.symbol_names), sol.symbol_nvars};
    for (const auto& e : o.at("x")) sol.x.push_back(sr.rf(e));
    r.solution = std::move(sol);
  }
  r.solution_note = j.at("solution_note").get<std::string>();
  const auto& v = j.at("verification");
  r.verification_ran = v.at("ran").get<bool>();
  for (const auto& e : v.at("entries")) {
    VerificationEntry ve;
    ve.claim = e.at("claim").get<std::string>();
    ve.passed = e.at("passed").get<bool>();
    ve.skipped = e.at("skipped").get<bool>();
    ve.observed = e.at("observed").get<double>();
    ve.detail = e.at("detail").get<std::string>();
    r.verification.push_back(std::move(ve));
  }
  for (const auto& e : j.at("errors")) {
    r.errors.push_back({e.at("stage").get<std::string>(), e.at("kind").get<std::string>(),
                        e.at("message").get<std::string>(), e.at("exit_code").get<int>()});
  }
  return r;
}

}  // namespace kd
