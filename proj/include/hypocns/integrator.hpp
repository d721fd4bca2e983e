#pragma once

// Integrating-factor time stepping. Per mode the linear part
//   d/dt (a, u)^ = M(xi) (a, u)^,   M(xi) = [[0, -i xi], [-i gamma xi, -|xi|^{2 beta}]]
// is advanced exactly; the nonlinear remainder uses the two-stage Lawson-Heun rule.
//
// The stepper works in the conservative pair (a, m = rho u), whose linear part is
// the same M(xi). The mass equation is then purely linear and both zero modes are
// conserved to the last bit.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypocns/analysis.hpp"
#include "hypocns/model.hpp"
#include "hypocns/spectral_core.hpp"

namespace hypocns {

struct Mat2 {
  Complex m00{1.0};
  Complex m01{0.0};
  Complex m10{0.0};
  Complex m11{1.0};

  void apply(Complex& x, Complex& y) const {
    const Complex nx = m00 * x + m01 * y;
    y = m10 * x + m11 * y;
    x = nx;
  }
};

/// exp(dt M(xi)) for dt >= 0.
Mat2 linear_propagator(double xi, double dt, const ModelParams& params);

/// exp(dt M) for every stored mode of a grid. The Nyquist mode has no resolved
/// derivative, so only its dissipation acts: diag(1, exp(-|xi|^{2 beta} dt)).
class PropagatorTable {
 public:
  PropagatorTable(const SpectralGrid& grid, double dt, const ModelParams& params);

  double dt() const { return dt_; }
  bool matches(double dt, const ModelParams& params) const;
  const Mat2& operator[](std::size_t k) const { return table_[k]; }
  void apply(Field& a, Field& u) const;

 private:
  double dt_;
  double beta_;
  double gamma_;
  std::vector<Mat2> table_;
};

struct StepperConfig {
  double dt = 0.0;  ///< step size; 0 picks the largest CFL-admissible step
  double t_end = 0.0;
  double cfl_safety = 0.5;
  double sample_interval = 1.0;
  bool nonlinear = true;  ///< false advances only the linear part
  DensityBounds bounds{};
};

/// Largest admissible step: cfl_safety dx / max(1, max|u| + sqrt(gamma)).
double cfl_limit(const SpectralGrid& grid, double max_abs_u, double gamma, double cfl_safety);

/// Steps the conservative pair, caching the propagator table per step size.
class Stepper {
 public:
  Stepper(ModelParams params, StepperConfig config);

  /// Advances (a, m) by h in place. Throws CflError or VacuumError.
  void advance(Field& a, Field& m, double h);
  /// max|u| seen by the last nonlinear evaluation.
  double last_max_velocity() const { return last_max_u_; }

 private:
  const PropagatorTable& table_for(const SpectralGrid& grid, double h);
  Field remainder(const Field& a, const Field& m);

  ModelParams params_;
  StepperConfig config_;
  std::optional<PropagatorTable> table_;
  double last_max_u_ = 0.0;
};

/// One step in the primitive variables (a, u).
State step(const State& state, double dt, const ModelParams& params, const StepperConfig& config = {});

enum class RunStatus { kOk, kVacuum, kInstability };

const char* to_string(RunStatus status);

struct RunResult {
  std::vector<FunctionalSample> samples;
  RunStatus status = RunStatus::kOk;
  std::string message;
  std::vector<std::string> warnings;
  std::optional<State> final_state;
  long steps = 0;
};

using Sampler = std::function<FunctionalSample(const State&)>;
/// Optional hook invoked with every sampled state.
using StateObserver = std::function<void(const State&)>;

/// Advances to t_end sampling every sample_interval (the final interval may be
/// shorter). Step sizes divide the sample interval, and a step that violates the
/// CFL bound is retried with half the step. Mid-run vacuum or loss of finiteness
/// stops the run and returns the samples gathered so far.
/// Throws VacuumError if the initial density is outside the guard bounds.
RunResult run(const State& state0, const StepperConfig& config, const ModelParams& params,
              const Sampler& sampler, const StateObserver& observer = {});

}  // namespace hypocns
