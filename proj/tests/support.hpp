#pragma once

#include <map>
#include <string>
#include <vector>

#include "kd/darboux.hpp"
#include "kd/expr_parser.hpp"
#include "kd/factor.hpp"
#include "kd/kahan.hpp"
#include "kd/ode.hpp"
#include "kd/report.hpp"
#include "kd/structure.hpp"

namespace kdtest {

inline const char* kEq2 = "x' = 2 - 2*x + x*z; y' = -y + y*z; z' = -y - 3*z + z^2";

// Reference factors of J for the test system, over x1..x3, h.
inline const char* kRefK1 = "-1/4*h^2*x2 + 3/4*h^2*x3 - 3/4*h^2 - 1/2*h*x3 - h + 1";
inline const char* kRefK2 = "-1/4*h^2*x2 - 1/4*h^2*x3 - 3/4*h^2 - 1/2*h*x3 + h + 1";
inline const char* kRefK3 = "-1/4*h^2*x2 - 3/4*h^2*x3 + 3/4*h^2 - 1/2*h*x3 + 2*h + 1";
inline const char* kRefK4 =
    "1/8*h^3*x2*x3 - 1/8*h^3*x3^2 - 1/4*h^3*x2 + 7/8*h^3*x3 + 1/4*h^2*x3^2 - 3/4*h^3 - 1/4*h^2*x2"
    " - 1/4*h^2*x3 - 5/4*h^2 - h*x3 + h + 1";
inline const char* kRefD1 = "-1/2*h*x3 + h + 1";
inline const char* kRefD2 = "1/2*h^2*x3^2 + 1/4*h^2*x2 - 5/4*h^2*x3 + 3/4*h^2 - 3/2*h*x3 + 2*h + 1";

inline kd::MultiPoly canon(const std::string& text, int n = 3) { return kd::parse_canonical(text, n); }

inline kd::MultiPoly poly(const kd::QuadraticOde& ode, const std::string& text) {
  std::map<std::string, int> slots;
  const auto names = ode.slot_names();
  for (std::size_t i = 0; i < names.size(); ++i) slots[names[i]] = static_cast<int>(i);
  return kd::parse_polynomial(text, slots, ode.dimension());
}

inline bool same_up_to_unit(const kd::MultiPoly& a, const kd::MultiPoly& b) {
  return a.normalized() == b.normalized();
}

// Shared, lazily computed pipeline pieces for the test system.
struct Eq2 {
  kd::QuadraticOde ode;
  kd::BirationalMap map;
  kd::JacobianData J;
  kd::FactorBasis basis;
  kd::DarbouxSearch affine;  // max_degree 1, max_exp 1
  std::vector<kd::ContinuumPair> continuum;

  static const Eq2& get() {
    static const Eq2 instance = [] {
      Eq2 e;
      e.ode = kd::parse_ode(kEq2);
      e.map = kd::build_kahan_map(e.ode);
      e.J = kd::jacobian_determinant(e.map);
      e.basis = kd::factor_basis(e.J.J);
      kd::DarbouxOptions opt;
      opt.max_degree = 1;
      opt.max_exp = 1;
      e.affine = kd::search_all(e.map, e.basis, opt);
      for (std::size_t i = 0; i < e.affine.pairs.size(); ++i) {
        auto cp = kd::continuum_limit(e.affine.pairs[i], e.basis, e.ode);
        cp.source = i;
        e.continuum.push_back(std::move(cp));
      }
      return e;
    }();
    return instance;
  }

  // Index of the continuum pair whose Pbar equals `text` up to unit.
  std::size_t index_of(const std::string& text) const {
    const auto p = poly(ode, text);
    for (std::size_t i = 0; i < continuum.size(); ++i) {
      if (same_up_to_unit(continuum[i].Pbar, p)) return i;
    }
    return continuum.size();
  }
};

// Sparse random quadratic field with small integer coefficients.
kd::QuadraticOde random_ode(kd::RationalSampler& rng, int n);

// Random product of 1-3 random polynomials of degree <= 2 in 1-3 state
// slots and h, some squared; n receives the slot count.
kd::MultiPoly random_product(kd::RationalSampler& rng, int& n);

// Reference closed-form solution of the test system with constants k2, k3, k4.
std::vector<double> reference_solution(double t, double k2, double k3, double k4);

}  // namespace kdtest
