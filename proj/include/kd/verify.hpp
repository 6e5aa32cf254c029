#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kd/darboux.hpp"
#include "kd/structure.hpp"

namespace kd {

// Fixed-step classical RK4 on long double state.
class Rk4Integrator {
 public:
  explicit Rk4Integrator(const QuadraticOde& ode);
  std::vector<long double> rhs(const std::vector<long double>& x) const;
  void step(std::vector<long double>& x, long double dt) const;

 private:
  int n_;
  std::vector<long double> a_, b_, c_;
};

struct TrajectoryCheck {
  double step = 0;
  double horizon = 0;
  std::size_t samples = 0;
  double max_relative_drift = 0;
};

// max |I(t) - I(0)| / |I(0)| along an RK4 trajectory. Throws
// DenominatorBlowup when a factor with negative exponent drops below 1e-9.
TrajectoryCheck check_integral_drift(const QuadraticOde& ode, const ProductForm& integral,
                                     const std::vector<double>& x0, double horizon, double step);

// max |P(x(t)) e^{-ct} - P(x0)| / |P(x0)|.
TrajectoryCheck check_exponential(const QuadraticOde& ode, const ProductForm& expression, const Rational& rate,
                                  const std::vector<double>& x0, double horizon, double step);

struct StepHalving {
  TrajectoryCheck coarse;
  TrajectoryCheck fine;
  double ratio = 0;  // coarse drift / fine drift
  bool order_four() const { return ratio >= 8 && ratio <= 32; }
};

StepHalving step_halving(const QuadraticOde& ode, const ProductForm& expression, const Rational& rate,
                         const std::vector<double>& x0, double horizon, double step);

struct MapDpCheck {
  bool holds = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

// P(phi(p)) == C(p) P(p) exactly at every (point, h).
MapDpCheck check_map_dp(const BirationalMap& map, const DarbouxPair& pair,
                        const std::vector<std::vector<Rational>>& points, const std::vector<Rational>& hs);

struct SolutionCheck {
  double max_residual = 0;
  std::vector<double> singular_times;
};

// max |dx/dt - f(x)| over the sample times, differentiating E_m = e^{c_m t}
// exactly.
SolutionCheck check_solution(const QuadraticOde& ode, const ClosedFormSolution& sol, const std::vector<double>& k,
                             const std::vector<double>& times);

// Seeded exact sample points (x only).
std::vector<std::vector<Rational>> sample_points(int n, std::size_t count, std::uint64_t seed);

}  // namespace kd
