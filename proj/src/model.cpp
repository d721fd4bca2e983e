#include "hypocns/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hypocns/errors.hpp"

namespace hypocns {

void ModelParams::validate() const {
  if (!(beta >= 0.5 && beta < 1.0)) {
    throw ParameterError("beta must lie in [1/2, 1), got " + std::to_string(beta));
  }
  if (!(gamma > 1.0)) throw ParameterError("gamma must exceed 1");
  if (!(k_cross > 0.0)) throw ParameterError("k_cross must be positive");
  if (!(c2_split > 0.0)) throw ParameterError("c2_split must be positive");
  if (!(s_reg >= beta)) throw ParameterError("s_reg must be >= beta");
  if (beta == 0.5 && !(s_reg > 0.5)) throw ParameterError("beta = 1/2 requires s_reg > 1/2");
  if (large_data && !(beta < 0.75)) {
    throw ParameterError("large-data regime requires beta < 3/4, got " + std::to_string(beta));
  }
}

double default_regularity(double beta, bool large_data) {
  if (large_data) return 1.0 + beta;
  return beta == 0.5 ? 0.6 : beta;
}

State::State(Field a_in, Field u_in, double t) : a(std::move(a_in)), u(std::move(u_in)), time(t) {
  if (a.grid() != u.grid()) throw ParameterError("state fields live on different grids");
}

State State::zero(const GridPtr& grid) { return State(Field(grid), Field(grid)); }

DensityReport check_density(std::span<const double> a_physical, DensityBounds bounds) {
  DensityReport r;
  const auto [lo, hi] = std::minmax_element(a_physical.begin(), a_physical.end());
  r.min_density = 1.0 + *lo;
  r.max_density = 1.0 + *hi;
  r.vacuum = !(r.min_density > 0.0);
  r.out_of_bounds = r.vacuum || r.min_density < bounds.rho_min || r.max_density > bounds.rho_max ||
                    !std::isfinite(r.min_density) || !std::isfinite(r.max_density);
  return r;
}

DensityReport check_density(const State& state, DensityBounds bounds) {
  return check_density(state.a.physical(), bounds);
}

double potential_density(double rho, double gamma) {
  if (!(rho > 0.0)) throw DomainError("potential density needs rho > 0");
  // (rho^gamma - rho)/(gamma - 1) + 1 - rho, rearranged around rho = 1 to limit cancellation.
  const double a = rho - 1.0;
  return rho * std::expm1((gamma - 1.0) * std::log1p(a)) / (gamma - 1.0) - a;
}

double pressure_coeff(double a, double gamma) {
  const double rho = 1.0 + a;
  // gamma a/rho + (gamma - gamma rho^{gamma-1})/rho = gamma (rho - rho^{gamma-1}) / rho
  return gamma * (rho - std::pow(rho, gamma - 1.0)) / rho;
}

namespace {

void require_positive_density(std::span<const double> a) {
  const auto report = check_density(a, {0.0, std::numeric_limits<double>::infinity()});
  if (report.vacuum) {
    std::ostringstream msg;
    msg << "vacuum: min density " << report.min_density;
    throw VacuumError(msg.str());
  }
}

}  // namespace

Field pressure_coeff_K(const Field& a, const ModelParams& params) {
  auto x = a.physical();
  require_positive_density(x);
  for (auto& v : x) v = pressure_coeff(v, params.gamma);
  return dealias(Field::from_physical(a.grid(), x));
}

Rhs nonlinear_rhs(const State& state, const ModelParams& params) {
  const auto& grid = state.grid();
  const auto a = state.a.physical();
  require_positive_density(a);
  const auto u = state.u.physical();

  const Field a_x = derivative(state.a);
  const Field u_x = derivative(state.u);
  const Field visc_u = fractional_laplacian(state.u, params.beta);
  const auto ax = a_x.physical();
  const auto ux = u_x.physical();
  const auto vu = visc_u.physical();

  std::vector<double> flux(a.size());
  std::vector<double> remainder(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    flux[j] = a[j] * u[j];
    remainder[j] = pressure_coeff(a[j], params.gamma) * ax[j] - u[j] * ux[j] +
                   a[j] / (1.0 + a[j]) * vu[j];
  }

  Field da_dt = derivative(state.u + dealias(Field::from_physical(grid, flux)));
  da_dt *= -1.0;
  Field du_dt = dealias(Field::from_physical(grid, remainder)) - visc_u - params.gamma * a_x;
  return {std::move(da_dt), std::move(du_dt)};
}

Field momentum_density(const Field& a, const Field& u) { return u + product(a, u); }

Field velocity_from_momentum(const Field& a, const Field& m) {
  auto ap = a.physical();
  require_positive_density(ap);
  auto mp = m.physical();
  for (std::size_t j = 0; j < mp.size(); ++j) mp[j] /= (1.0 + ap[j]);
  return Field::from_physical(a.grid(), mp);
}

Field momentum_remainder(const Field& a, const Field& m, const ModelParams& params,
                         DensityBounds bounds, double* max_abs_u) {
  const auto& grid = a.grid();
  const auto ap = a.physical();
  const auto report = check_density(ap, bounds);
  if (report.out_of_bounds) {
    std::ostringstream msg;
    msg << "density left [" << bounds.rho_min << ", " << bounds.rho_max << "]: min "
        << report.min_density << ", max " << report.max_density;
    throw VacuumError(msg.str());
  }
  const auto mp = m.physical();
  std::vector<double> u(ap.size());
  std::vector<double> flux(ap.size());
  for (std::size_t j = 0; j < ap.size(); ++j) {
    u[j] = mp[j] / (1.0 + ap[j]);
    const double pressure_excess =
        std::expm1(params.gamma * std::log1p(ap[j])) - params.gamma * ap[j];
    flux[j] = mp[j] * u[j] + pressure_excess;
  }
  if (max_abs_u != nullptr) {
    double peak = 0.0;
    for (double v : u) peak = std::max(peak, std::abs(v));
    *max_abs_u = peak;
  }
  const Field uf = Field::from_physical(grid, u);
  const Field ff = Field::from_physical(grid, flux);

  const auto xi = grid->wavenumbers();
  const double order = 2.0 * params.beta;
  Field out(grid);
  for (std::size_t k = 1; k < xi.size(); ++k) {
    out[k] = std::pow(xi[k], order) * (m[k] - uf[k]) - Complex(0.0, xi[k]) * ff[k];
  }
  out[grid->nyquist_index()] = 0.0;
  return dealias(out);
}

}  // namespace hypocns
