#pragma once

// Initial data per hypothesis class, power-law fits, Lyapunov and energy-identity
// checks on sampled trajectories, regime guards, single runs and sweeps.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypocns/analysis.hpp"
#include "hypocns/integrator.hpp"
#include "hypocns/model.hpp"

namespace hypocns {

enum class DataKind { kSmallGaussian, kNonzeroMass, kLargeL2Flat, kZeroMassOscillatory, kCustomModes };

const char* to_string(DataKind kind);
DataKind data_kind_from_string(const std::string& name);

struct ModeAmplitude {
  int mode = 1;  ///< integer wavenumber index m, xi = 2 pi m / L
  double a = 0.0;
  double u = 0.0;
  bool operator==(const ModeAmplitude&) const = default;
};

/// Data kinds:
///   small_gaussian         a0 = u0 = A exp(-(x-c)^2 / (2 w^2))
///   nonzero_mass           a0 = A exp(-(x-c)^2 / (2 w^2)), u0 = 0
///   large_l2_flat          a0 = A sech((x-c)/w), u0 = 0
///   zero_mass_oscillatory  a0 = derivative of a Gaussian bump scaled to peak A, u0 = 0
///   custom_modes           sum over modes of cosines with seeded random phases
/// A is the peak amplitude. target_norms may hold "l2" (sets A for large_l2_flat)
/// and "gradient" (upper bound on ||d/dx (a0,u0)||_{H^{s-1}}).
struct InitialDataSpec {
  DataKind kind = DataKind::kSmallGaussian;
  double amplitude = 1e-3;
  double width = 10.0;
  std::uint64_t seed = 0;
  std::optional<double> center;  ///< defaults to L/2
  std::vector<ModeAmplitude> modes;
  std::map<std::string, double> target_norms;
  bool operator==(const InitialDataSpec&) const = default;
};

struct InitialDataReport {
  double hs_norm = 0.0;        ///< ||(a0,u0)||_{H^s}
  double l2_norm = 0.0;        ///< ||(a0,u0)||_{L^2}
  double gradient_norm = 0.0;  ///< ||d/dx (a0,u0)||_{H^{s-1}}
  double besov_neg_half = 0.0;
  double mass_a = 0.0;
  double mass_u = 0.0;
};

struct GeneratedData {
  State state;
  InitialDataReport report;
};

InitialDataReport describe_initial_data(const State& state, const ModelParams& params);
GeneratedData generate_initial_data(const InitialDataSpec& spec, const GridPtr& grid,
                                    const ModelParams& params);

// ---------------------------------------------------------------------------

struct DecayFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double r_squared = 0.0;
  std::size_t n_samples = 0;
};

/// Least squares of log(norm) on log(1+t) over samples with t in [t_lo, t_hi].
DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& series,
                            std::pair<double, double> window);

double predicted_exponent(double s1, double beta);

// ---------------------------------------------------------------------------

enum class LyapunovOrder { kOrder0, kOrder1 };

struct LyapunovReport {
  double max_residual = 0.0;  ///< max over interior samples of (dE/dt + D) / max(D, floor)
  double worst_time = 0.0;
  std::size_t n_checked = 0;
  double tolerance = 0.05;
  bool passed = true;
};

/// Throws PreconditionError on non-uniform or too short trajectories.
LyapunovReport verify_lyapunov(const std::vector<FunctionalSample>& trajectory, LyapunovOrder which,
                               double tolerance = 0.05);

struct EnergyIdentityReport {
  double max_residual = 0.0;  ///< max |dE/dt + ||Lambda^beta u||^2| / ||Lambda^beta u||^2
  double worst_time = 0.0;
  std::size_t n_checked = 0;
  double tolerance = 1e-3;
  bool passed = true;
};

/// E is the physical energy int (G(rho) + rho u^2 / 2).
EnergyIdentityReport verify_energy_identity(const std::vector<FunctionalSample>& trajectory,
                                            double tolerance = 1e-3);

struct IntermediateBoundReport {
  std::optional<DecayFit> fit;  ///< decay of sqrt(script_E1)
  double threshold = 0.0;       ///< -1/(2 beta) + 0.05 / (2 beta)
  double power_constant = 0.0;  ///< largest c with dE1/dt + c E1^{1+beta} <= 0 at all interior samples
  bool regime_ok = true;
  bool vacuous = false;
  bool passed = false;
  std::string message;
};

/// Minimum ||(a0,u0)||_{L^2} treated as large data.
inline constexpr double kLargeDataL2Threshold = 0.5;

IntermediateBoundReport verify_intermediate_bound(const std::vector<FunctionalSample>& trajectory,
                                                  const ModelParams& params,
                                                  std::pair<double, double> window,
                                                  double initial_l2_norm);

// ---------------------------------------------------------------------------

struct ConservationReport {
  double mean_drift = 0.0;         ///< max |mean(a)(t) - mean(a)(0)|
  double momentum_drift = 0.0;     ///< max |P(t) - P(0)| / scale
  double momentum_scale = 0.0;     ///< |P(0)|, or sqrt(L E0(0)) when P(0) = 0
  bool passed = true;
};

ConservationReport check_conservation(const std::vector<FunctionalSample>& trajectory,
                                      double domain_length, double mean_tol = 1e-13,
                                      double momentum_tol = 1e-10);

struct GuardCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct GuardOptions {
  bool enforce = true;
  double small_delta = 1e-2;      ///< ||(a0,u0)||_{H^s} ceiling for small data
  double large_gradient = 1e-2;   ///< ||d/dx (a0,u0)||_{H^{s-1}} ceiling for large data
  bool operator==(const GuardOptions&) const = default;
};

/// Hypothesis checks for the regime selected by params.large_data.
std::vector<GuardCheck> regime_guards(const InitialDataReport& report, const ModelParams& params,
                                      const GuardOptions& options);

struct KAudit {
  double k_initial = 0.0;
  double k_final = 0.0;
  double ratio = 0.0;  ///< script_E0 / ||(a0,u0)||^2_{H^s} at k_final
  int halvings = 0;
  bool passed = false;
};

/// Halves k_cross until 0.5 <= script_E0 / ||(a0,u0)||^2_{H^s} <= 2.
KAudit audit_k(const State& state0, const ModelParams& params, int max_halvings = 20);

// ---------------------------------------------------------------------------

struct OutputOptions {
  std::string directory = "out";
  std::vector<double> s1 = {0.0};
  bool plots = false;
  std::optional<std::pair<double, double>> fit_window;  ///< defaults to [t_end/10, t_end]
  bool operator==(const OutputOptions&) const = default;
};

struct OracleOptions {
  std::vector<double> times;
  double s1 = 0.0;
  double threshold = 0.95;
  /// Reference constant always reported, C_beta^2(c0, eta, s1, beta).
  double ref_c0 = 1.0;
  double ref_eta = 1.0;
  double ref_s1 = 0.0;
  double ref_beta = 0.5;
  bool operator==(const OracleOptions&) const = default;
};

struct SweepGrid {
  std::vector<double> beta;
  std::vector<double> gamma;
  std::vector<double> amplitude;
  std::vector<double> s1;
  bool operator==(const SweepGrid&) const = default;
};

struct GridSpec {
  int n_points = 4096;
  double domain_length = 1256.6370614359173;  ///< 400 pi
  bool operator==(const GridSpec&) const = default;
};

struct StepperSpec {
  double dt = 0.0;
  double t_end = 100.0;
  double cfl_safety = 0.5;
  double sample_interval = 1.0;
  bool nonlinear = true;
  double rho_min = 0.25;
  double rho_max = 4.0;
  bool operator==(const StepperSpec&) const = default;

  StepperConfig to_config() const;
};

struct RunConfig {
  ModelParams model;
  GridSpec grid;
  StepperSpec stepper;
  InitialDataSpec data;
  OutputOptions outputs;
  OracleOptions oracle;
  SweepGrid sweep;
  GuardOptions guards;

  std::pair<double, double> fit_window() const;
  bool operator==(const RunConfig&) const = default;
};

struct FitEntry {
  double s1 = 0.0;
  double predicted = 0.0;
  std::optional<DecayFit> fit;
  std::string error;
};

/// Fits every requested s1 norm of a trajectory on the window.
std::vector<FitEntry> fit_trajectory(const std::vector<FunctionalSample>& trajectory,
                                     const std::vector<double>& s1_values, double beta,
                                     std::pair<double, double> window);

struct ExperimentResult {
  InitialDataReport data_report;
  std::vector<GuardCheck> guards;
  KAudit k_audit;
  RunResult run;
  std::vector<FitEntry> fits;
  ConservationReport conservation;
};

/// Generates the datum, validates the regime (throws ConfigError on a violated
/// hypothesis when guards are enforced), runs and fits.
ExperimentResult run_experiment(const RunConfig& config, const StateObserver& observer = {});

struct SweepRow {
  double beta = 0.0;
  double gamma = 0.0;
  double amplitude = 0.0;
  double s1 = 0.0;
  double fitted = 0.0;
  double predicted = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  std::string status;
  std::string run_directory;
};

/// Called once per finished run (from a worker thread, serialised by a mutex).
using RunSink = std::function<void(std::size_t index, const RunConfig&, const ExperimentResult*,
                                   const std::string& error)>;

/// Expands the sweep grid (empty axes fall back to the base value) into run configs.
std::vector<RunConfig> expand_sweep(const RunConfig& base);

/// Executes every run on a bounded worker pool. Failures are recorded, not thrown.
std::vector<SweepRow> run_sweep(const RunConfig& base, int workers, const RunSink& sink = {});

}  // namespace hypocns
