#include "hypocns/linear_oracle.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypocns/analysis.hpp"
#include "hypocns/errors.hpp"
#include "hypocns/integrator.hpp"

namespace hypocns {

State linear_evolve(const State& state0, double t, const ModelParams& params) {
  if (!(t >= 0.0)) throw ParameterError("linear_evolve needs t >= 0");
  State out(state0.a, state0.u, state0.time + t);
  if (t == 0.0) return out;
  PropagatorTable(state0.a.grid_ref(), t, params).apply(out.a, out.u);
  return out;
}

double lower_bound_constant_squared(double c0, double eta, double s1, double beta) {
  if (!(c0 >= 0.0)) throw ParameterError("c0 must be nonnegative");
  if (!(eta > 0.0)) throw ParameterError("eta must be positive");
  if (!(s1 >= 0.0)) throw ParameterError("s1 must be nonnegative");
  if (!(beta > 0.0)) throw ParameterError("beta must be positive");
  if (c0 == 0.0) return 0.0;

  auto integrand = [s1, beta](double y) {
    if (y <= 0.0) return s1 == 0.0 ? 1.0 : 0.0;
    return std::pow(y, 2.0 * s1) * std::exp(-2.0 * std::pow(y, 2.0 * beta));
  };
  constexpr double kTol = 1e-12;
  double half;
  if (std::isinf(eta)) {
    boost::math::quadrature::exp_sinh<double> rule;
    half = rule.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), kTol);
  } else {
    boost::math::quadrature::tanh_sinh<double> rule;
    half = rule.integrate(integrand, 0.0, eta, kTol);
  }
  // even integrand
  return 0.25 * c0 * c0 * 2.0 * half;
}

double lower_bound_constant(double c0, double eta, double s1, double beta) {
  return std::sqrt(lower_bound_constant_squared(c0, eta, s1, beta));
}

LowFrequencyMass low_frequency_mass(const State& state0) {
  const auto& grid = state0.a.grid_ref();
  const double length = grid.domain_length();
  LowFrequencyMass out;
  // continuum transform f^(xi) = int f e^{-i x xi} dx = L c_m
  auto magnitude = [&](std::size_t k) {
    return length * std::sqrt(std::norm(state0.a[k]) + std::norm(state0.u[k]));
  };
  out.c0 = magnitude(0);
  if (!(out.c0 > 0.0)) throw PreconditionError("lower bound needs a datum with nonzero mass");
  const auto xi = grid.wavenumbers();
  std::size_t last = 0;
  for (std::size_t k = 1; k < grid.nyquist_index(); ++k) {
    if (magnitude(k) < 0.5 * out.c0) break;
    last = k;
  }
  if (last == 0) {
    throw PreconditionError("no resolved mode keeps |(a0^, u0^)| >= c0/2; enlarge the box");
  }
  out.eta = xi[last];
  return out;
}

LowerBoundReport linear_lower_bound_check(const State& state0, const ModelParams& params, double s1,
                                          const std::vector<double>& times, double threshold) {
  const auto mass = low_frequency_mass(state0);
  LowerBoundReport report;
  report.c0 = mass.c0;
  report.eta = mass.eta;
  report.s1 = s1;
  report.threshold = threshold;
  report.constant_squared = lower_bound_constant_squared(mass.c0, mass.eta, s1, params.beta);
  report.min_ratio = std::numeric_limits<double>::infinity();

  const double root_gamma = std::sqrt(params.gamma);
  const double rate = (1.0 + 2.0 * s1) / (2.0 * params.beta);
  for (double t : times) {
    const State lin = linear_evolve(state0, t, params);
    const double na = sobolev_norm(lin.a, s1);
    const double nu = sobolev_norm(lin.u, s1);
    LowerBoundEntry e;
    e.time = t;
    e.norm_squared = kPlancherelFactor * (root_gamma * root_gamma * na * na + nu * nu);
    e.bound = report.constant_squared * std::pow(1.0 + t, -rate);
    e.ratio = e.norm_squared / e.bound;
    report.min_ratio = std::min(report.min_ratio, e.ratio);
    report.entries.push_back(e);
  }
  report.passed = times.empty() || report.min_ratio >= threshold;
  if (times.empty()) report.min_ratio = 0.0;
  return report;
}

}  // namespace hypocns
