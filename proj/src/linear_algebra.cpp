#include "kd/linear_algebra.hpp"

#include <algorithm>

#include "kd/errors.hpp"

namespace kd {

namespace {

using UniRow = std::vector<UniPoly>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < m[i].size(); ++j) {
        if (m[r][j] != 0) m[i][j] -= f * m[r][j];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

void make_row_primitive(UniRow& row) {
  UniPoly g;
  for (const auto& e : row) {
    if (e.is_zero()) continue;
    g = g.is_zero() ? e.monic() : gcd(g, e);
    if (g.is_constant()) break;
  }
  if (g.is_zero()) return;
  if (!g.is_constant()) {
    for (auto& e : row) {
      if (!e.is_zero()) e = e.exact_div(g);
    }
  }
  std::vector<Rational> all;
  for (const auto& e : row) all.insert(all.end(), e.coeffs().begin(), e.coeffs().end());
  Integer l = lcm_of_denominators(all);
  for (auto& x : all) x *= l;
  Integer n = gcd_of_numerators(all);
  Rational scale(l, n);
  scale.canonicalize();
  if (scale != 1) {
    for (auto& e : row) e = e * scale;
  }
}

UniPoly lcm(const UniPoly& a, const UniPoly& b) { return (a * b).exact_div(gcd(a, b)).monic(); }

// Nullspace of `m` by Gauss-Jordan over Q[h] with cross multiplication and
// row-gcd removal after every update.
std::vector<UniRow> primitive_gauss_jordan_nullspace(std::vector<UniRow> m, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (auto& row : m) make_row_primitive(row);
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t best = m.size();
    for (std::size_t i = r; i < m.size(); ++i) {
      if (m[i][c].is_zero()) continue;
      if (best == m.size() || m[i][c].degree() < m[best][c].degree()) best = i;
    }
    if (best == m.size()) continue;
    std::swap(m[best], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      UniPoly g = gcd(m[r][c], m[i][c]);
      UniPoly a = m[r][c].exact_div(g);
      UniPoly b = m[i][c].exact_div(g);
      for (std::size_t j = 0; j < cols; ++j) {
        if (m[r][j].is_zero() && m[i][j].is_zero()) continue;
        m[i][j] = a * m[i][j] - b * m[r][j];
      }
      make_row_primitive(m[i]);
    }
    pivot_cols.push_back(c);
    ++r;
  }

  std::vector<UniRow> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), f) != pivot_cols.end()) continue;
    UniPoly scale = UniPoly::constant(1);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      if (!m[i][f].is_zero()) scale = lcm(scale, m[i][pivot_cols[i]]);
    }
    UniRow v(cols);
    v[f] = scale;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      if (m[i][f].is_zero()) continue;
      v[pivot_cols[i]] = -(m[i][f] * scale.exact_div(m[i][pivot_cols[i]]));
    }
    make_row_primitive(v);
    for (const auto& e : v) {
      if (e.is_zero()) continue;
      if (e.lead() < 0) {
        for (auto& x : v) x = -x;
      }
      break;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

bool annihilates(const std::vector<UniRow>& m, const UniRow& v) {
  for (const auto& row : m) {
    UniPoly acc;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (!row[j].is_zero() && !v[j].is_zero()) acc = acc + row[j] * v[j];
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

MultiPoly cofactor_det(const PolyMatrix& m, int nvars) {
  const std::size_t n = m.size();
  if (n == 0) return MultiPoly::constant(nvars, 1);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  MultiPoly det(nvars);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    PolyMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<MultiPoly> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      minor.push_back(std::move(row));
    }
    MultiPoly term = m[0][j] * cofactor_det(minor, nvars);
    if (j % 2) {
      det -= term;
    } else {
      det += term;
    }
  }
  return det;
}

MultiPoly bareiss_det(PolyMatrix m, int nvars) {
  const std::size_t n = m.size();
  MultiPoly prev = MultiPoly::constant(nvars, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return MultiPoly(nvars);
      std::swap(m[p], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev);
      }
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

}  // namespace

void LinearSystem::validate() const {
  const std::size_t c = cols();
  for (const auto& row : matrix) {
    if (row.size() != c) throw InvalidInput("ragged linear system");
    for (const auto& e : row) {
      if (!e.is_zero() && !e.is_univariate_in(e.h_slot())) {
        throw InvalidInput("linear system entry depends on state variables");
      }
    }
  }
  if (rhs && rhs->size() != rows()) throw InvalidInput("rhs length does not match row count");
}

std::vector<std::vector<UniPoly>> nullspace_over_Qh(const std::vector<std::vector<UniPoly>>& matrix,
                                                     std::uint64_t seed) {
  const std::size_t cols = matrix.empty() ? 0 : matrix.front().size();
  if (cols == 0) return {};
  if (matrix.empty()) {
    std::vector<UniRow> basis;
    for (std::size_t f = 0; f < cols; ++f) {
      UniRow v(cols);
      v[f] = UniPoly::constant(1);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  // The rank at a sample h is at most the generic rank, so rows independent
  // at the sample are independent over Q(h); full column rank at the sample
  // proves the nullspace is trivial.
  RationalSampler rng(seed);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Rational h0 = rng.next_rational(997, 101);
    if (h0 == 0) h0 = Rational(1, 3);
    std::vector<std::pair<std::size_t, RationalVector>> echelon;  // pivot col, row with pivot 1
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < matrix.size() && chosen.size() < cols; ++i) {
      RationalVector v(cols);
      bool any = false;
      for (std::size_t j = 0; j < cols; ++j) {
        v[j] = matrix[i][j].eval(h0);
        any = any || v[j] != 0;
      }
      if (!any) continue;
      for (const auto& [p, b] : echelon) {
        if (v[p] == 0) continue;
        Rational f = v[p];
        for (std::size_t j = 0; j < cols; ++j) {
          if (b[j] != 0) v[j] -= f * b[j];
        }
      }
      auto nz = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
      if (nz == v.end()) continue;
      std::size_t p = static_cast<std::size_t>(nz - v.begin());
      Rational inv = 1 / v[p];
      for (auto& x : v) x *= inv;
      echelon.emplace_back(p, std::move(v));
      chosen.push_back(i);
    }
    if (chosen.size() == cols) return {};
    std::vector<UniRow> sub;
    for (std::size_t i : chosen) sub.push_back(matrix[i]);
    auto basis = primitive_gauss_jordan_nullspace(std::move(sub), cols);
    bool ok = std::all_of(basis.begin(), basis.end(), [&](const UniRow& v) { return annihilates(matrix, v); });
    if (ok) return basis;
  }
  return primitive_gauss_jordan_nullspace(matrix, cols);
}

std::vector<std::vector<MultiPoly>> nullspace_over_Qh(const LinearSystem& sys, std::uint64_t seed) {
  sys.validate();
  if (sys.matrix.empty()) return {};
  const int nvars = sys.matrix.front().front().nvars();
  const int h = nvars;
  std::vector<std::vector<UniPoly>> m;
  for (const auto& row : sys.matrix) {
    std::vector<UniPoly> r;
    for (const auto& e : row) r.push_back(UniPoly::from_multipoly(e, h));
    m.push_back(std::move(r));
  }
  std::vector<std::vector<MultiPoly>> out;
  for (const auto& v : nullspace_over_Qh(m, seed)) {
    std::vector<MultiPoly> w;
    for (const auto& e : v) w.push_back(e.to_multipoly(nvars, h));
    out.push_back(std::move(w));
  }
  return out;
}

int rank_over_Q(RationalMatrix m) {
  std::size_t cols = m.empty() ? 0 : m.front().size();
  return static_cast<int>(rref(m, cols).size());
}

std::vector<RationalVector> nullspace_over_Q(const RationalMatrix& matrix, std::size_t cols) {
  RationalMatrix m = matrix;
  auto pivots = rref(m, cols);
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    RationalVector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<AffineSolution> solve_rational(const RationalMatrix& matrix, const RationalVector& rhs,
                                             std::size_t cols) {
  if (rhs.size() != matrix.size()) throw InvalidInput("rhs length does not match row count");
  RationalMatrix aug = matrix;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    if (aug[i].size() != cols) throw InvalidInput("ragged matrix");
    aug[i].push_back(rhs[i]);
  }
  auto pivots = rref(aug, cols + 1);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  AffineSolution sol;
  sol.particular.assign(cols, Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) sol.particular[pivots[i]] = aug[i][cols];
  sol.nullspace = nullspace_over_Q(matrix, cols);
  return sol;
}

MultiPoly determinant(const PolyMatrix& m, int nvars) {
  for (const auto& row : m) {
    if (row.size() != m.size()) throw InvalidInput("determinant of a non-square matrix");
  }
  if (m.size() <= 4) return cofactor_det(m, nvars);
  return bareiss_det(m, nvars);
}

PolyMatrix adjugate(const PolyMatrix& m, int nvars) {
  const std::size_t n = m.size();
  PolyMatrix adj(n, std::vector<MultiPoly>(n, MultiPoly(nvars)));
  if (n == 1) {
    adj[0][0] = MultiPoly::constant(nvars, 1);
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      PolyMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<MultiPoly> row;
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) row.push_back(m[r][c]);
        }
        minor.push_back(std::move(row));
      }
      MultiPoly d = determinant(minor, nvars);
      adj[i][j] = ((i + j) % 2) ? -d : d;
    }
  }
  return adj;
}

}  // namespace kd
