#include "kd/ode.hpp"

#include <cctype>
#include <map>

#include "json.hpp"
#include "kd/errors.hpp"
#include "kd/expr_parser.hpp"

namespace kd {

namespace {

struct Statement {
  std::string text;
  int line;
  int column;
};

std::vector<Statement> split_statements(std::string_view src) {
  std::vector<Statement> out;
  int line = 1;
  std::size_t pos = 0;
  while (pos <= src.size()) {
    std::size_t eol = src.find('\n', pos);
    if (eol == std::string_view::npos) eol = src.size();
    std::string_view l = src.substr(pos, eol - pos);
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    std::size_t start = 0;
    while (start <= l.size()) {
      std::size_t semi = l.find(';', start);
      if (semi == std::string_view::npos) semi = l.size();
      std::string_view piece = l.substr(start, semi - start);
      bool blank = true;
      for (char c : piece) blank = blank && std::isspace(static_cast<unsigned char>(c));
      if (!blank) out.push_back({std::string(piece), line, static_cast<int>(start) + 1});
      start = semi + 1;
    }
    pos = eol + 1;
    ++line;
  }
  return out;
}

Rational json_rational(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_float()) {
    double d = v.get<double>();
    Rational q(d);
    if (q.get_d() != d) throw InvalidInput("non-representable coefficient");
    return q;
  }
  throw InvalidInput("coefficient must be a number or a \"p/q\" string");
}

}  // namespace

QuadraticOde::QuadraticOde(int n, std::vector<std::string> names)
    : n_(n), names_(std::move(names)), a_(n * n * n), b_(n * n), c_(n) {
  if (n < 1) throw InvalidInput("ODE dimension must be at least 1");
  if (static_cast<int>(names_.size()) != n) throw InvalidInput("one name per state variable required");
}

std::vector<std::string> QuadraticOde::slot_names() const {
  auto s = names_;
  s.push_back("h");
  return s;
}

void QuadraticOde::set_quadratic(int i, int j, int k, const Rational& v) {
  a_[(i * n_ + j) * n_ + k] = v;
  a_[(i * n_ + k) * n_ + j] = v;
}

void QuadraticOde::set_component(int i, const MultiPoly& f) {
  for (int j = 0; j < n_; ++j) {
    set_linear(i, j, 0);
    for (int k = 0; k < n_; ++k) a_[(i * n_ + j) * n_ + k] = 0;
  }
  set_constant(i, 0);
  for (const auto& t : f.terms()) {
    std::vector<int> vars;
    for (int s = 0; s < n_; ++s) {
      for (int e = 0; e < t.mono[s]; ++e) vars.push_back(s);
    }
    if (t.mono[n_] != 0) throw InvalidInput("right-hand side depends on h");
    switch (vars.size()) {
      case 0:
        set_constant(i, t.coef);
        break;
      case 1:
        set_linear(i, vars[0], t.coef);
        break;
      case 2:
        if (vars[0] == vars[1]) {
          set_quadratic(i, vars[0], vars[0], t.coef);
        } else {
          set_quadratic(i, vars[0], vars[1], t.coef / 2);
        }
        break;
      default:
        throw InvalidInput("right-hand side has degree above 2");
    }
  }
}

QuadraticOde parse_ode(std::string_view source) {
  auto statements = split_statements(source);
  std::vector<std::string> names;
  std::map<std::string, int> slots;
  std::vector<std::pair<std::string, Statement>> bodies;
  for (const auto& st : statements) {
    const std::string& s = st.text;
    std::size_t p = 0;
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    std::size_t name_start = p;
    if (p >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[p])) || s[p] == '_')) {
      throw ParseError("expected a variable name", st.line, st.column + static_cast<int>(p));
    }
    while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) || s[p] == '_')) ++p;
    std::string name = s.substr(name_start, p - name_start);
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    if (p >= s.size() || s[p] != '\'') {
      throw ParseError("expected ' after variable name", st.line, st.column + static_cast<int>(p));
    }
    ++p;
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    if (p >= s.size() || s[p] != '=') throw ParseError("expected '='", st.line, st.column + static_cast<int>(p));
    ++p;
    if (slots.count(name)) {
      throw ParseError("variable '" + name + "' defined twice", st.line, st.column + static_cast<int>(name_start));
    }
    slots[name] = static_cast<int>(names.size());
    names.push_back(name);
    bodies.emplace_back(s.substr(p), Statement{st.text, st.line, st.column + static_cast<int>(p)});
  }
  if (names.empty()) throw ParseError("no equations found", 1, 1);

  const int n = static_cast<int>(names.size());
  QuadraticOde ode(n, names);
  for (int i = 0; i < n; ++i) {
    const auto& [body, st] = bodies[i];
    MultiPoly f = parse_polynomial(body, slots, n, st.line, st.column);
    if (f.total_degree() > 2) {
      throw DegreeTooHigh("right-hand side of " + names[i] + "' has degree " + std::to_string(f.total_degree()) +
                              "; Kahan's method needs degree <= 2",
                          st.line, st.column);
    }
    ode.set_component(i, f);
  }
  return ode;
}

QuadraticOde parse_ode_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, static_cast<int>(e.byte));
  }
  try {
    int n = j.at("n").get<int>();
    std::vector<std::string> names;
    if (j.contains("names")) {
      names = j.at("names").get<std::vector<std::string>>();
    } else {
      for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    }
    QuadraticOde ode(n, names);
    const auto& a = j.at("a");
    const auto& b = j.at("b");
    const auto& c = j.at("c");
    for (int i = 0; i < n; ++i) {
      ode.set_constant(i, json_rational(c.at(i)));
      for (int k = 0; k < n; ++k) ode.set_linear(i, k, json_rational(b.at(i).at(k)));
    }
    for (int i = 0; i < n; ++i) {
      for (int p = 0; p < n; ++p) {
        for (int q = p; q < n; ++q) {
          Rational v = (json_rational(a.at(i).at(p).at(q)) + json_rational(a.at(i).at(q).at(p))) / 2;
          ode.set_quadratic(i, p, q, v);
        }
      }
    }
    return ode;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ODE JSON: ") + e.what(), 1, 1);
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("malformed ODE JSON: ") + e.what(), 1, 1);
  }
}

QuadraticOde parse_ode_any(std::string_view source) {
  for (char c : source) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_ode_json(source);
    break;
  }
  return parse_ode(source);
}

std::string print_ode(const QuadraticOde& ode) {
  auto f = rhs(ode);
  auto names = ode.slot_names();
  std::string out;
  for (int i = 0; i < ode.dimension(); ++i) {
    out += ode.names()[i] + "' = " + f[i].to_string(names) + "\n";
  }
  return out;
}

std::vector<MultiPoly> rhs(const QuadraticOde& ode) {
  const int n = ode.dimension();
  std::vector<MultiPoly> f;
  for (int i = 0; i < n; ++i) {
    std::vector<MultiPoly::Term> terms;
    if (ode.constant(i) != 0) terms.push_back({Monomial{}, ode.constant(i)});
    for (int j = 0; j < n; ++j) {
      if (ode.linear(i, j) != 0) terms.push_back({Monomial::unit(j), ode.linear(i, j)});
      for (int k = 0; k < n; ++k) {
        if (ode.quadratic(i, j, k) == 0) continue;
        terms.push_back({Monomial::unit(j) * Monomial::unit(k), ode.quadratic(i, j, k)});
      }
    }
    f.emplace_back(n, std::move(terms));
  }
  return f;
}

PolyMatrix jacobian_matrix(const QuadraticOde& ode) {
  auto f = rhs(ode);
  const int n = ode.dimension();
  PolyMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i].push_back(f[i].derivative(j));
  }
  return m;
}

MultiPoly divergence(const QuadraticOde& ode) {
  auto f = rhs(ode);
  MultiPoly d(ode.dimension());
  for (int i = 0; i < ode.dimension(); ++i) d += f[i].derivative(i);
  return d;
}

}  // namespace kd
