#pragma once

// Exact evolution of the linearized system and the low-frequency lower bound
//   ||Lambda^{s1} (sqrt(gamma) a_L, u_L)||^2 >= C_beta^2 (1+t)^{-(1+2 s1)/(2 beta)},
//   C_beta^2 = (c0^2/4) int_{|y| <= eta} |y|^{2 s1} exp(-2 |y|^{2 beta}) dy.
//
// c0 and eta come from the transform f^(xi) = int f e^{-i x xi} dx, and the
// left side is measured on the same side: int |xi|^{2 s1} |f^|^2 dxi, which is
// 2 pi times the physical L^2 norm squared.

#include <numbers>
#include <vector>

#include "hypocns/model.hpp"

namespace hypocns {

/// int |f^(xi)|^2 dxi / ||f||^2_{L^2}
inline constexpr double kPlancherelFactor = 2.0 * std::numbers::pi;

/// Advances every mode by exp(t M(xi)); no time-stepping error.
State linear_evolve(const State& state0, double t, const ModelParams& params);

/// C_beta^2. eta may be +infinity.
double lower_bound_constant_squared(double c0, double eta, double s1, double beta);
double lower_bound_constant(double c0, double eta, double s1, double beta);

struct LowFrequencyMass {
  double c0 = 0.0;   ///< |(int a0, int u0)|
  double eta = 0.0;  ///< largest grid |xi| with |(a0^, u0^)| >= c0/2 on all modes up to it
};

/// Throws PreconditionError for a zero-mass datum or when even the first nonzero
/// mode falls below c0/2 (box too small to resolve the plateau).
LowFrequencyMass low_frequency_mass(const State& state0);

struct LowerBoundEntry {
  double time = 0.0;
  double norm_squared = 0.0;  ///< int |xi|^{2 s1} |(sqrt(gamma) a_L^, u_L^)|^2 dxi
  double bound = 0.0;         ///< C_beta^2 (1+t)^{-(1+2 s1)/(2 beta)}
  double ratio = 0.0;
};

struct LowerBoundReport {
  double c0 = 0.0;
  double eta = 0.0;
  double s1 = 0.0;
  double constant_squared = 0.0;
  std::vector<LowerBoundEntry> entries;
  double min_ratio = 0.0;
  bool passed = false;  ///< every ratio >= threshold
  double threshold = 0.95;
};

LowerBoundReport linear_lower_bound_check(const State& state0, const ModelParams& params, double s1,
                                          const std::vector<double>& times, double threshold = 0.95);

}  // namespace hypocns
