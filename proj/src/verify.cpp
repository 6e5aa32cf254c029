#include "kd/verify.hpp"

#include <cmath>

#include "kd/errors.hpp"

namespace kd {

namespace {

constexpr long double kSingular = 1e-9L;

template <class Measure>
TrajectoryCheck integrate(const QuadraticOde& ode, const ProductForm& expr, const std::vector<double>& x0,
                          double horizon, double step, Measure&& measure) {
  const int n = ode.dimension();
  if (static_cast<int>(x0.size()) != n) throw InvalidInput("initial point has the wrong dimension");
  if (step <= 0 || horizon < 0) throw InvalidInput("step must be positive and horizon nonnegative");
  Rk4Integrator rk(ode);
  std::vector<long double> x(x0.begin(), x0.end());
  auto value = [&](const std::vector<long double>& state, long double t) {
    std::vector<long double> pt(state);
    pt.push_back(0);
    for (std::size_t i = 0; i < expr.factors.size(); ++i) {
      if (expr.exponents[i] < 0 && std::fabs(expr.factors[i].eval_long_double(pt)) < kSingular) {
        throw DenominatorBlowup("integral denominator vanishes along the trajectory", static_cast<double>(t));
      }
    }
    return measure(expr.eval_long_double(pt), t);
  };
  const long double v0 = value(x, 0);
  if (std::fabs(v0) < kSingular) throw InvalidInput("initial value of the checked quantity is zero");
  const auto steps = static_cast<long>(std::llround(horizon / step));
  TrajectoryCheck check;
  check.step = step;
  check.horizon = horizon;
  long double worst = 0;
  for (long s = 1; s <= steps; ++s) {
    rk.step(x, step);
    const long double v = value(x, static_cast<long double>(s) * step);
    worst = std::max(worst, std::fabs(v - v0) / std::fabs(v0));
    ++check.samples;
  }
  check.max_relative_drift = static_cast<double>(worst);
  return check;
}

}  // namespace

Rk4Integrator::Rk4Integrator(const QuadraticOde& ode) : n_(ode.dimension()) {
  for (int i = 0; i < n_; ++i) {
    c_.push_back(ode.constant(i).get_d());
    for (int j = 0; j < n_; ++j) {
      b_.push_back(ode.linear(i, j).get_d());
      for (int k = 0; k < n_; ++k) a_.push_back(ode.quadratic(i, j, k).get_d());
    }
  }
}

std::vector<long double> Rk4Integrator::rhs(const std::vector<long double>& x) const {
  std::vector<long double> out(n_);
  for (int i = 0; i < n_; ++i) {
    long double acc = c_[i];
    for (int j = 0; j < n_; ++j) {
      acc += b_[i * n_ + j] * x[j];
      for (int k = 0; k < n_; ++k) acc += a_[(i * n_ + j) * n_ + k] * x[j] * x[k];
    }
    out[i] = acc;
  }
  return out;
}

void Rk4Integrator::step(std::vector<long double>& x, long double dt) const {
  auto shifted = [&](const std::vector<long double>& k, long double s) {
    std::vector<long double> y(x);
    for (int i = 0; i < n_; ++i) y[i] += s * k[i];
    return y;
  };
  auto k1 = rhs(x);
  auto k2 = rhs(shifted(k1, dt / 2));
  auto k3 = rhs(shifted(k2, dt / 2));
  auto k4 = rhs(shifted(k3, dt));
  for (int i = 0; i < n_; ++i) x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

TrajectoryCheck check_integral_drift(const QuadraticOde& ode, const ProductForm& integral,
                                     const std::vector<double>& x0, double horizon, double step) {
  return integrate(ode, integral, x0, horizon, step, [](long double v, long double) { return v; });
}

TrajectoryCheck check_exponential(const QuadraticOde& ode, const ProductForm& expression, const Rational& rate,
                                  const std::vector<double>& x0, double horizon, double step) {
  const long double c = rate.get_d();
  return integrate(ode, expression, x0, horizon, step, [c](long double v, long double t) { return v * std::exp(-c * t); });
}

StepHalving step_halving(const QuadraticOde& ode, const ProductForm& expression, const Rational& rate,
                         const std::vector<double>& x0, double horizon, double step) {
  StepHalving r;
  r.coarse = check_exponential(ode, expression, rate, x0, horizon, step);
  r.fine = check_exponential(ode, expression, rate, x0, horizon, step / 2);
  r.ratio = r.fine.max_relative_drift > 0 ? r.coarse.max_relative_drift / r.fine.max_relative_drift : 0;
  return r;
}

MapDpCheck check_map_dp(const BirationalMap& map, const DarbouxPair& pair,
                        const std::vector<std::vector<Rational>>& points, const std::vector<Rational>& hs) {
  MapDpCheck r;
  if (points.empty() || hs.empty()) {
    r.warnings.push_back("no sample points: check is vacuous");
    return r;
  }
  for (const auto& p : points) {
    for (const auto& h : hs) {
      std::vector<Rational> pt(p);
      pt.push_back(h);
      auto image = map.apply(pt);
      if (!image || pair.C.den().eval(pt) == 0) {
        ++r.skipped;
        r.warnings.push_back("singular sample skipped");
        continue;
      }
      image->push_back(h);
      ++r.checked;
      if (pair.P.eval(*image) != pair.C.eval(pt) * pair.P.eval(pt)) r.holds = false;
    }
  }
  return r;
}

SolutionCheck check_solution(const QuadraticOde& ode, const ClosedFormSolution& sol, const std::vector<double>& k,
                             const std::vector<double>& times) {
  SolutionCheck r;
  auto f = rhs(ode);
  for (double t : times) {
    auto x = sol.eval(k, t);
    bool finite = true;
    for (double v : x) finite = finite && std::isfinite(v);
    if (!finite) {
      r.singular_times.push_back(t);
      continue;
    }
    auto dx = sol.time_derivative(k, t);
    std::vector<double> pt(x);
    pt.push_back(0);
    for (int i = 0; i < ode.dimension(); ++i) {
      r.max_residual = std::max(r.max_residual, std::fabs(dx[i] - f[i].eval_double(pt)));
    }
  }
  return r;
}

std::vector<std::vector<Rational>> sample_points(int n, std::size_t count, std::uint64_t seed) {
  RationalSampler rng(seed);
  std::vector<std::vector<Rational>> out(count, std::vector<Rational>(n));
  for (auto& p : out) {
    for (auto& v : p) v = rng.next_rational(11, 7);
  }
  return out;
}

}  // namespace kd
