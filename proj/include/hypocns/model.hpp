#pragma once

// Perturbation form of the 1D isentropic hypo-viscous compressible system,
// with rho = 1 + a, P(rho) = rho^gamma and unit viscosity:
//
//   a_t + u_x             = -(a u)_x
//   u_t + (-Delta)^beta u + gamma a_x = K(a) a_x + F
//
//   K(a) = gamma a/(1+a) + (P'(1) - P'(1+a))/(1+a)
//   F    = -u u_x + a/(1+a) (-Delta)^beta u

#include <utility>

#include "hypocns/spectral_core.hpp"

namespace hypocns {

struct ModelParams {
  double beta = 0.6;
  double gamma = 1.4;
  /// Weight of the density/velocity cross term in the Lyapunov functionals.
  double k_cross = 0.05;
  /// Fourier-splitting radius constant C_2.
  double c2_split = 10.0;
  /// Regularity index s of the functionals.
  double s_reg = 0.6;
  /// Large-data regime (O(1) L^2 norm, small gradient); requires beta < 3/4.
  bool large_data = false;

  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

/// beta for small data (0.6 when beta = 1/2), 1 + beta for large data.
double default_regularity(double beta, bool large_data);

struct State {
  Field a;
  Field u;
  double time = 0.0;

  State(Field a_in, Field u_in, double t = 0.0);
  static State zero(const GridPtr& grid);
  const GridPtr& grid() const { return a.grid(); }
};

struct DensityBounds {
  double rho_min = 0.25;
  double rho_max = 4.0;
};

struct DensityReport {
  double min_density = 1.0;
  double max_density = 1.0;
  bool vacuum = false;         ///< min density <= 0
  bool out_of_bounds = false;  ///< outside [rho_min, rho_max] (implies flag on vacuum)
};

DensityReport check_density(const State& state, DensityBounds bounds = {});
DensityReport check_density(std::span<const double> a_physical, DensityBounds bounds = {});

/// Potential energy density G(rho) = rho * int_1^rho (s^gamma - 1)/s^2 ds.
double potential_density(double rho, double gamma);

/// Pointwise K(a) for a > -1.
double pressure_coeff(double a, double gamma);

Field pressure_coeff_K(const Field& a, const ModelParams& params);

struct Rhs {
  Field da_dt;
  Field du_dt;
};

Rhs nonlinear_rhs(const State& state, const ModelParams& params);

/// Momentum density m = (1 + a) u, dealiased.
Field momentum_density(const Field& a, const Field& u);
/// u = m / (1 + a) evaluated pointwise.
Field velocity_from_momentum(const Field& a, const Field& m);

/// Nonlinear part of the momentum equation in conservative variables (a, m):
///   m_t + (-Delta)^beta m + gamma a_x = (-Delta)^beta (m - u) - (m u + P(rho) - P(1) - gamma a)_x
/// The mass equation a_t + m_x = 0 is linear. The returned field has an exactly
/// vanishing zero mode. Throws VacuumError when 1 + a leaves the guard bounds.
Field momentum_remainder(const Field& a, const Field& m, const ModelParams& params,
                         DensityBounds bounds = {}, double* max_abs_u = nullptr);

}  // namespace hypocns
