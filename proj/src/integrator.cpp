#include "hypocns/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypocns/errors.hpp"

namespace hypocns {

namespace {

// sinh(z)/z, by its Taylor series near the origin.
Complex sinhc(Complex z) {
  if (std::abs(z) >= 0.5) return std::sinh(z) / z;
  const Complex z2 = z * z;
  Complex term = 1.0;
  Complex sum = 1.0;
  for (int n = 1; n < 20; ++n) {
    term *= z2 / static_cast<double>((2 * n) * (2 * n + 1));
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

bool all_finite(const Field& f) {
  for (const auto& c : f.spectrum()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

}  // namespace

Mat2 linear_propagator(double xi, double dt, const ModelParams& params) {
  if (!(dt >= 0.0)) throw ParameterError("propagator time step must be nonnegative");
  const double x = std::abs(xi);
  Mat2 p;
  if (x == 0.0 || dt == 0.0) return p;

  const double nu = std::pow(x, 2.0 * params.beta);
  const double gamma = params.gamma;
  const double mid = -0.5 * nu;
  // lambda_pm = mid +- half_gap
  const Complex half_gap = 0.5 * std::sqrt(Complex(nu * nu - 4.0 * gamma * x * x, 0.0));
  const Complex lambda_plus = mid + half_gap;

  Complex c0;
  Complex c1;
  const double decay = std::exp(mid * dt);
  if (2.0 * std::abs(half_gap) < 1e-8 * std::max(1.0, std::abs(lambda_plus))) {
    c0 = decay * (1.0 - mid * dt);
    c1 = decay * dt;
  } else if (std::abs(half_gap * dt) < 0.5) {
    const Complex z = half_gap * dt;
    const Complex sc = sinhc(z);
    c0 = decay * (std::cosh(z) - mid * dt * sc);
    c1 = decay * dt * sc;
  } else {
    const Complex lambda_minus = mid - half_gap;
    const Complex ep = std::exp(lambda_plus * dt);
    const Complex em = std::exp(lambda_minus * dt);
    c1 = (ep - em) / (2.0 * half_gap);
    c0 = (lambda_plus * em - lambda_minus * ep) / (2.0 * half_gap);
  }
  // exp(dt M) = c0 I + c1 M
  const Complex i_xi(0.0, x);
  p.m00 = c0;
  p.m01 = -c1 * i_xi;
  p.m10 = -c1 * gamma * i_xi;
  p.m11 = c0 - c1 * nu;
  return p;
}

PropagatorTable::PropagatorTable(const SpectralGrid& grid, double dt, const ModelParams& params)
    : dt_(dt), beta_(params.beta), gamma_(params.gamma) {
  const auto xi = grid.wavenumbers();
  table_.reserve(xi.size());
  for (double x : xi) table_.push_back(linear_propagator(x, dt, params));
  Mat2 nyquist;
  nyquist.m11 = std::exp(-std::pow(grid.max_wavenumber(), 2.0 * params.beta) * dt);
  table_[grid.nyquist_index()] = nyquist;
}

bool PropagatorTable::matches(double dt, const ModelParams& params) const {
  return dt == dt_ && params.beta == beta_ && params.gamma == gamma_;
}

void PropagatorTable::apply(Field& a, Field& u) const {
  for (std::size_t k = 0; k < table_.size(); ++k) table_[k].apply(a[k], u[k]);
}

double cfl_limit(const SpectralGrid& grid, double max_abs_u, double gamma, double cfl_safety) {
  return cfl_safety * grid.dx() / std::max(1.0, max_abs_u + std::sqrt(gamma));
}

// ---------------------------------------------------------------------------

Stepper::Stepper(ModelParams params, StepperConfig config)
    : params_(params), config_(config) {
  if (!(config_.cfl_safety > 0.0 && config_.cfl_safety <= 1.0)) {
    throw ParameterError("cfl_safety must lie in (0, 1]");
  }
}

const PropagatorTable& Stepper::table_for(const SpectralGrid& grid, double h) {
  if (!table_ || !table_->matches(h, params_)) table_.emplace(grid, h, params_);
  return *table_;
}

Field Stepper::remainder(const Field& a, const Field& m) {
  Field r = momentum_remainder(a, m, params_, config_.bounds, &last_max_u_);
  if (!std::isfinite(last_max_u_) || !all_finite(r)) {
    throw InstabilityError("non-finite values in the nonlinear remainder");
  }
  return r;
}

void Stepper::advance(Field& a, Field& m, double h) {
  const auto& grid = a.grid_ref();
  const auto& propagate = table_for(grid, h);
  if (!config_.nonlinear) {
    propagate.apply(a, m);
    return;
  }

  const Field r1 = remainder(a, m);
  const double limit = cfl_limit(grid, last_max_u_, params_.gamma, config_.cfl_safety);
  if (h > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step " << h << " exceeds CFL limit " << limit << " (max|u| = " << last_max_u_ << ")";
    throw CflError(msg.str());
  }

  Field a_stage = a;
  Field m_stage = m + h * r1;
  propagate.apply(a_stage, m_stage);
  const Field r2 = remainder(a_stage, m_stage);

  Field m_half = m + (0.5 * h) * r1;
  propagate.apply(a, m_half);
  m = m_half + (0.5 * h) * r2;
}

State step(const State& state, double dt, const ModelParams& params, const StepperConfig& config) {
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  Stepper stepper(params, config);
  Field a = state.a;
  Field m = config.nonlinear ? momentum_density(state.a, state.u) : state.u;
  stepper.advance(a, m, dt);
  Field u = config.nonlinear ? velocity_from_momentum(a, m) : m;
  return State(std::move(a), std::move(u), state.time + dt);
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kVacuum: return "vacuum";
    case RunStatus::kInstability: return "instability";
  }
  return "unknown";
}

namespace {

double max_abs(const std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  return peak;
}

}  // namespace

RunResult run(const State& state0, const StepperConfig& config, const ModelParams& params,
              const Sampler& sampler, const StateObserver& observer) {
  params.validate();
  if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end)) {
    throw ParameterError("t_end must be nonnegative and finite");
  }
  if (!(config.sample_interval > 0.0)) throw ParameterError("sample_interval must be positive");
  if (config.dt < 0.0) throw ParameterError("dt must be positive (or 0 for automatic)");

  const auto density = check_density(state0, config.bounds);
  if (density.out_of_bounds) {
    std::ostringstream msg;
    msg << "initial density outside [" << config.bounds.rho_min << ", " << config.bounds.rho_max
        << "]: min " << density.min_density << ", max " << density.max_density;
    throw VacuumError(msg.str());
  }

  const auto& grid = state0.a.grid_ref();
  RunResult result;
  const double diffusive_length = std::pow(config.t_end, 1.0 / (2.0 * params.beta));
  if (diffusive_length > grid.domain_length() / 4.0) {
    std::ostringstream msg;
    msg << "box saturation: diffusive length t_end^(1/(2 beta)) = " << diffusive_length
        << " exceeds L/4 = " << grid.domain_length() / 4.0;
    result.warnings.push_back(msg.str());
  }

  State current(state0.a, state0.u, 0.0);
  result.samples.push_back(sampler(current));
  if (observer) observer(current);

  Field a = state0.a;
  Field m = config.nonlinear ? momentum_density(state0.a, state0.u) : state0.u;
  Stepper stepper(params, config);
  double max_u = max_abs(state0.u.physical());

  const double interval = config.sample_interval;
  const auto n_intervals = static_cast<long>(std::ceil(config.t_end / interval - 1e-9));
  double t = 0.0;
  for (long i = 1; i <= n_intervals; ++i) {
    const double t_next = i == n_intervals ? config.t_end : interval * static_cast<double>(i);
    const double span = t_next - t;
    double h_target = span;
    if (config.dt > 0.0) h_target = std::min(h_target, config.dt);
    if (config.nonlinear) {
      h_target = std::min(h_target, cfl_limit(grid, max_u, params.gamma, config.cfl_safety));
    }
    auto n_sub = static_cast<long>(std::ceil(span / h_target - 1e-9));
    n_sub = std::max(n_sub, 1L);

    Field a_try = a;
    Field m_try = m;
    for (;;) {
      a_try = a;
      m_try = m;
      const double h = span / static_cast<double>(n_sub);
      try {
        for (long k = 0; k < n_sub; ++k) stepper.advance(a_try, m_try, h);
        result.steps += n_sub;
        break;
      } catch (const CflError&) {
        n_sub *= 2;
        if (n_sub > (1L << 40)) {
          result.status = RunStatus::kInstability;
          result.message = "step size collapsed under the CFL bound near t = " + std::to_string(t);
          result.final_state = current;
          return result;
        }
      } catch (const VacuumError& e) {
        result.status = RunStatus::kVacuum;
        result.message = e.what();
        result.final_state = current;
        return result;
      } catch (const InstabilityError& e) {
        result.status = RunStatus::kInstability;
        result.message = e.what();
        result.final_state = current;
        return result;
      }
    }
    if (!all_finite(a_try) || !all_finite(m_try)) {
      result.status = RunStatus::kInstability;
      result.message = "non-finite state before t = " + std::to_string(t_next);
      result.final_state = current;
      return result;
    }

    a = std::move(a_try);
    m = std::move(m_try);
    t = t_next;
    try {
      Field u = config.nonlinear ? velocity_from_momentum(a, m) : m;
      State next(a, std::move(u), t);
      result.samples.push_back(sampler(next));
      if (observer) observer(next);
      current = std::move(next);
    } catch (const VacuumError& e) {
      result.status = RunStatus::kVacuum;
      result.message = e.what();
      result.final_state = current;
      return result;
    }
    if (config.nonlinear) max_u = stepper.last_max_velocity();
  }
  result.final_state = current;
  return result;
}

}  // namespace hypocns
