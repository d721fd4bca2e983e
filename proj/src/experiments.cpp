#include "hypocns/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "hypocns/errors.hpp"

namespace hypocns {

const char* to_string(DataKind kind) {
  switch (kind) {
    case DataKind::kSmallGaussian: return "small_gaussian";
    case DataKind::kNonzeroMass: return "nonzero_mass";
    case DataKind::kLargeL2Flat: return "large_l2_flat";
    case DataKind::kZeroMassOscillatory: return "zero_mass_oscillatory";
    case DataKind::kCustomModes: return "custom_modes";
  }
  return "unknown";
}

DataKind data_kind_from_string(const std::string& name) {
  for (auto kind : {DataKind::kSmallGaussian, DataKind::kNonzeroMass, DataKind::kLargeL2Flat,
                    DataKind::kZeroMassOscillatory, DataKind::kCustomModes}) {
    if (name == to_string(kind)) return kind;
  }
  throw SpecError("unknown initial data kind '" + name + "'");
}

// ---------------------------------------------------------------------------
// Initial data

InitialDataReport describe_initial_data(const State& state, const ModelParams& params) {
  InitialDataReport r;
  const double s = params.s_reg;
  r.hs_norm = std::sqrt(pair_hs_norm_squared(state, s));
  r.l2_norm = sobolev_norm(state.a, state.u, 0.0);
  // ||f'||^2_{H^{s-1}} = ||Lambda f||^2 + ||Lambda^s f||^2 in the split convention
  const double d1 = sobolev_norm(state.a, state.u, 1.0);
  const double ds = sobolev_norm(state.a, state.u, s);
  r.gradient_norm = std::sqrt(d1 * d1 + ds * ds);
  r.besov_neg_half = besov_neg_half_norm(state.a, state.u, LPBlocks(state.a.grid_ref()),
                                         MeanPolicy::kIgnoreMean);
  r.mass_a = state.a.integral();
  r.mass_u = state.u.integral();
  return r;
}

namespace {

double peak(const Field& f) {
  double p = 0.0;
  for (double v : f.physical()) p = std::max(p, std::abs(v));
  return p;
}

double uniform_phase(std::mt19937_64& rng) {
  return 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(rng() >> 11), -53);
}

}  // namespace

GeneratedData generate_initial_data(const InitialDataSpec& spec, const GridPtr& grid,
                                    const ModelParams& params) {
  const double length = grid->domain_length();
  const double c = spec.center.value_or(0.5 * length);
  const double w = spec.width;
  double amp = spec.amplitude;
  for (const auto& [name, value] : spec.target_norms) {
    if (name != "l2" && name != "gradient") throw SpecError("unknown target norm '" + name + "'");
    if (!(value > 0.0)) throw SpecError("target norms must be positive");
  }
  if (spec.kind != DataKind::kCustomModes) {
    if (!(w > 0.0) || !std::isfinite(w)) throw SpecError("width must be positive");
    if (w < 2.0 * grid->dx()) throw SpecError("width is below two grid spacings");
  }
  const bool gaussian_like = spec.kind == DataKind::kSmallGaussian ||
                             spec.kind == DataKind::kNonzeroMass ||
                             spec.kind == DataKind::kZeroMassOscillatory;
  if (gaussian_like && 16.0 * w > length) {
    throw SpecError("Gaussian width must satisfy 16 w <= L to stay periodic to round-off");
  }

  auto gaussian = [&](double a) {
    return Field::from_function(grid, [&](double x) {
      const double y = x - c;
      return a * std::exp(-y * y / (2.0 * w * w));
    });
  };

  Field a(grid);
  Field u(grid);
  switch (spec.kind) {
    case DataKind::kSmallGaussian:
      a = gaussian(amp);
      u = gaussian(amp);
      break;
    case DataKind::kNonzeroMass:
      a = gaussian(amp);
      break;
    case DataKind::kLargeL2Flat: {
      if (w > 0.25 * length) {
        throw SpecError("large L^2 data with small gradient needs width <= L/4");
      }
      if (auto it = spec.target_norms.find("l2"); it != spec.target_norms.end()) {
        amp = it->second / std::sqrt(2.0 * w);
      }
      a = Field::from_function(grid, [&](double x) {
        // periodic distance to the centre keeps the profile even about c
        double y = std::remainder(x - c, length);
        return amp / std::cosh(y / w);
      });
      break;
    }
    case DataKind::kZeroMassOscillatory: {
      Field bump = derivative(gaussian(1.0));
      const double p = peak(bump);
      a = (amp / p) * bump;
      break;
    }
    case DataKind::kCustomModes: {
      if (spec.modes.empty()) throw SpecError("custom_modes needs at least one mode");
      std::mt19937_64 rng(spec.seed);
      const double two_pi_over_l = 2.0 * std::numbers::pi / length;
      std::vector<double> av(static_cast<std::size_t>(grid->n_points()), 0.0);
      std::vector<double> uv(av.size(), 0.0);
      const auto x = grid->coordinates();
      for (const auto& m : spec.modes) {
        if (m.mode < 1 || m.mode > grid->dealias_cutoff()) {
          throw SpecError("mode index " + std::to_string(m.mode) + " outside the dealiased band");
        }
        const double phase_a = uniform_phase(rng);
        const double phase_u = uniform_phase(rng);
        const double xi = two_pi_over_l * m.mode;
        for (std::size_t j = 0; j < x.size(); ++j) {
          av[j] += m.a * std::cos(xi * x[j] + phase_a);
          uv[j] += m.u * std::cos(xi * x[j] + phase_u);
        }
      }
      a = Field::from_physical(grid, av);
      u = Field::from_physical(grid, uv);
      break;
    }
  }

  State state(dealias(a), dealias(u));
  auto report = describe_initial_data(state, params);
  if (auto it = spec.target_norms.find("l2"); it != spec.target_norms.end()) {
    if (std::abs(report.l2_norm - it->second) > 0.05 * it->second) {
      throw SpecError("target L^2 norm not achievable with this width on this box");
    }
  }
  if (auto it = spec.target_norms.find("gradient"); it != spec.target_norms.end()) {
    if (report.gradient_norm > 1.05 * it->second) {
      std::ostringstream msg;
      msg << "gradient norm " << report.gradient_norm << " exceeds the target " << it->second
          << "; widen the profile";
      throw SpecError(msg.str());
    }
  }
  return {std::move(state), report};
}

// ---------------------------------------------------------------------------
// Fits

DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& series,
                            std::pair<double, double> window) {
  const auto [lo, hi] = window;
  if (!(lo < hi)) throw PreconditionError("fit window needs t_lo < t_hi");
  const double slack = 1e-9 * std::max(1.0, std::abs(hi));
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [t, norm] : series) {
    if (t < lo - slack || t > hi + slack) continue;
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DomainError("non-positive norm inside the fit window at t = " + std::to_string(t));
    }
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(norm));
  }
  if (xs.size() < 10) {
    throw PreconditionError("fit needs at least 10 samples in the window, got " +
                            std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw PreconditionError("fit window holds a single time");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  fit.window = window;
  fit.n_samples = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double predicted_exponent(double s1, double beta) { return -(1.0 + 2.0 * s1) / (4.0 * beta); }

// ---------------------------------------------------------------------------
// Trajectory checks

namespace {

double uniform_spacing(const std::vector<FunctionalSample>& tr) {
  if (tr.size() < 3) throw PreconditionError("trajectory check needs at least 3 samples");
  const double h = tr[1].time - tr[0].time;
  if (!(h > 0.0)) throw PreconditionError("sample times must increase");
  for (std::size_t i = 1; i < tr.size(); ++i) {
    if (std::abs(tr[i].time - tr[i - 1].time - h) > 1e-9 * h) {
      throw PreconditionError("trajectory is not uniformly sampled");
    }
  }
  return h;
}

// Centered time derivative at sample i: fourth order when five points fit.
struct Derivative {
  std::size_t first;
  std::size_t last;  // exclusive
  bool wide;
};

Derivative interior(std::size_t n) {
  if (n >= 5) return {2, n - 2, true};
  return {1, n - 1, false};
}

template <class Get>
double centered(const std::vector<FunctionalSample>& tr, std::size_t i, double h, bool wide,
                Get get) {
  if (wide) {
    return (get(tr[i - 2]) - 8.0 * get(tr[i - 1]) + 8.0 * get(tr[i + 1]) - get(tr[i + 2])) /
           (12.0 * h);
  }
  return (get(tr[i + 1]) - get(tr[i - 1])) / (2.0 * h);
}

}  // namespace

LyapunovReport verify_lyapunov(const std::vector<FunctionalSample>& trajectory, LyapunovOrder which,
                               double tolerance) {
  const double h = uniform_spacing(trajectory);
  const bool first = which == LyapunovOrder::kOrder0;
  auto energy = [first](const FunctionalSample& s) { return first ? s.script_E0 : s.script_E1; };
  auto dissipation = [first](const FunctionalSample& s) { return first ? s.script_D0 : s.script_D1; };

  double d_max = 0.0;
  for (const auto& s : trajectory) d_max = std::max(d_max, dissipation(s));
  const double floor = 1e-12 * d_max + std::numeric_limits<double>::min();

  LyapunovReport r;
  r.tolerance = tolerance;
  r.max_residual = -std::numeric_limits<double>::infinity();
  const auto range = interior(trajectory.size());
  for (std::size_t i = range.first; i < range.last; ++i) {
    const double de = centered(trajectory, i, h, range.wide, energy);
    const double d = dissipation(trajectory[i]);
    const double res = (de + d) / std::max(d, floor);
    if (res > r.max_residual) {
      r.max_residual = res;
      r.worst_time = trajectory[i].time;
    }
    ++r.n_checked;
  }
  r.passed = r.max_residual <= tolerance;
  return r;
}

EnergyIdentityReport verify_energy_identity(const std::vector<FunctionalSample>& trajectory,
                                            double tolerance) {
  const double h = uniform_spacing(trajectory);
  auto energy = [](const FunctionalSample& s) { return s.physical_energy(); };
  double d_max = 0.0;
  for (const auto& s : trajectory) d_max = std::max(d_max, s.viscous_dissipation);
  const double floor = 1e-12 * d_max + std::numeric_limits<double>::min();

  EnergyIdentityReport r;
  r.tolerance = tolerance;
  const auto range = interior(trajectory.size());
  for (std::size_t i = range.first; i < range.last; ++i) {
    const double de = centered(trajectory, i, h, range.wide, energy);
    const double d = trajectory[i].viscous_dissipation;
    const double res = std::abs(de + d) / std::max(d, floor);
    if (res > r.max_residual) {
      r.max_residual = res;
      r.worst_time = trajectory[i].time;
    }
    ++r.n_checked;
  }
  r.passed = r.max_residual <= tolerance;
  return r;
}

IntermediateBoundReport verify_intermediate_bound(const std::vector<FunctionalSample>& trajectory,
                                                  const ModelParams& params,
                                                  std::pair<double, double> window,
                                                  double initial_l2_norm) {
  IntermediateBoundReport r;
  r.threshold = -1.0 / (2.0 * params.beta) + 0.05 / (2.0 * params.beta);
  const bool all_zero = std::all_of(trajectory.begin(), trajectory.end(),
                                    [](const FunctionalSample& s) { return s.script_E1 == 0.0; });
  if (all_zero) {
    r.vacuous = true;
    r.passed = true;
    r.message = "zero trajectory";
    return r;
  }
  if (initial_l2_norm < kLargeDataL2Threshold) {
    r.regime_ok = false;
    std::ostringstream msg;
    msg << "regime mismatch: ||(a0,u0)||_L2 = " << initial_l2_norm
        << " is below the large-data threshold " << kLargeDataL2Threshold;
    r.message = msg.str();
  }

  std::vector<std::pair<double, double>> series;
  for (const auto& s : trajectory) series.emplace_back(s.time, std::sqrt(std::max(s.script_E1, 0.0)));
  try {
    r.fit = fit_decay_exponent(series, window);
  } catch (const std::exception& e) {
    if (!r.message.empty()) r.message += "; ";
    r.message += e.what();
    return r;
  }

  const double h = uniform_spacing(trajectory);
  const auto range = interior(trajectory.size());
  auto energy = [](const FunctionalSample& s) { return s.script_E1; };
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t i = range.first; i < range.last; ++i) {
    const double t = trajectory[i].time;
    if (t < window.first || t > window.second) continue;
    const double de = centered(trajectory, i, h, range.wide, energy);
    c = std::min(c, -de / std::pow(trajectory[i].script_E1, 1.0 + params.beta));
  }
  r.power_constant = std::isfinite(c) ? c : 0.0;
  r.passed = r.regime_ok && r.fit->exponent <= r.threshold && r.power_constant > 0.0;
  return r;
}

ConservationReport check_conservation(const std::vector<FunctionalSample>& trajectory,
                                      double domain_length, double mean_tol, double momentum_tol) {
  ConservationReport r;
  if (trajectory.empty()) return r;
  const auto& s0 = trajectory.front();
  r.momentum_scale = std::abs(s0.momentum);
  if (r.momentum_scale == 0.0) r.momentum_scale = std::sqrt(domain_length * s0.E0);
  if (r.momentum_scale == 0.0) r.momentum_scale = 1.0;
  for (const auto& s : trajectory) {
    r.mean_drift = std::max(r.mean_drift, std::abs(s.mean_a - s0.mean_a));
    r.momentum_drift = std::max(r.momentum_drift, std::abs(s.momentum - s0.momentum) / r.momentum_scale);
  }
  r.passed = r.mean_drift <= mean_tol && r.momentum_drift <= momentum_tol;
  return r;
}

std::vector<GuardCheck> regime_guards(const InitialDataReport& report, const ModelParams& params,
                                      const GuardOptions& options) {
  std::vector<GuardCheck> checks;
  auto add = [&](std::string name, bool ok, double value, double bound, const char* relation) {
    std::ostringstream detail;
    detail << value << ' ' << relation << ' ' << bound;
    checks.push_back({std::move(name), ok, detail.str()});
  };
  if (params.large_data) {
    add("large_data_beta", params.beta < 0.75, params.beta, 0.75, "<");
    add("large_data_l2", report.l2_norm >= kLargeDataL2Threshold, report.l2_norm,
        kLargeDataL2Threshold, ">=");
    add("large_data_gradient", report.gradient_norm <= 1.05 * options.large_gradient,
        report.gradient_norm, options.large_gradient, "<=");
  } else {
    add("small_data_hs", report.hs_norm <= options.small_delta, report.hs_norm, options.small_delta,
        "<=");
  }
  return checks;
}

KAudit audit_k(const State& state0, const ModelParams& params, int max_halvings) {
  KAudit audit;
  audit.k_initial = params.k_cross;
  ModelParams p = params;
  const double norm = pair_hs_norm_squared(state0, p.s_reg);
  for (;;) {
    const auto sample = functional_suite(state0, p, {});
    audit.ratio = norm > 0.0 ? sample.script_E0 / norm : 1.0;
    audit.passed = audit.ratio >= 0.5 && audit.ratio <= 2.0;
    if (audit.passed || audit.halvings >= max_halvings) break;
    p.k_cross *= 0.5;
    ++audit.halvings;
  }
  audit.k_final = p.k_cross;
  return audit;
}

// ---------------------------------------------------------------------------
// Runs

StepperConfig StepperSpec::to_config() const {
  StepperConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.cfl_safety = cfl_safety;
  c.sample_interval = sample_interval;
  c.nonlinear = nonlinear;
  c.bounds = {rho_min, rho_max};
  return c;
}

std::pair<double, double> RunConfig::fit_window() const {
  if (outputs.fit_window) return *outputs.fit_window;
  return {stepper.t_end / 10.0, stepper.t_end};
}

std::vector<FitEntry> fit_trajectory(const std::vector<FunctionalSample>& trajectory,
                                     const std::vector<double>& s1_values, double beta,
                                     std::pair<double, double> window) {
  std::vector<FitEntry> fits;
  for (double s1 : s1_values) {
    FitEntry entry;
    entry.s1 = s1;
    entry.predicted = predicted_exponent(s1, beta);
    try {
      std::vector<std::pair<double, double>> series;
      series.reserve(trajectory.size());
      for (const auto& s : trajectory) series.emplace_back(s.time, s.sobolev(s1));
      entry.fit = fit_decay_exponent(series, window);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    fits.push_back(std::move(entry));
  }
  return fits;
}

ExperimentResult run_experiment(const RunConfig& config, const StateObserver& observer) {
  config.model.validate();
  const auto grid = SpectralGrid::create(config.grid.n_points, config.grid.domain_length);
  auto data = generate_initial_data(config.data, grid, config.model);

  ExperimentResult result;
  result.data_report = data.report;
  result.guards = regime_guards(data.report, config.model, config.guards);
  if (config.guards.enforce) {
    for (const auto& g : result.guards) {
      if (!g.passed) throw ConfigError("hypothesis violated: " + g.name + " (" + g.detail + ")");
    }
  }

  ModelParams params = config.model;
  if (!params.large_data) {
    result.k_audit = audit_k(data.state, params);
    params.k_cross = result.k_audit.k_final;
    result.guards.push_back({"k_audit", result.k_audit.passed,
                             "ratio " + std::to_string(result.k_audit.ratio) + " at k = " +
                                 std::to_string(result.k_audit.k_final)});
  } else {
    result.k_audit.k_initial = result.k_audit.k_final = params.k_cross;
    result.k_audit.passed = true;
  }

  const FunctionalSuite suite(grid, params, config.outputs.s1);
  result.run = run(data.state, config.stepper.to_config(), params, suite, observer);
  result.fits = fit_trajectory(result.run.samples, config.outputs.s1, params.beta, config.fit_window());
  result.conservation = check_conservation(result.run.samples, config.grid.domain_length);
  return result;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<RunConfig> expand_sweep(const RunConfig& base) {
  auto axis = [](const std::vector<double>& values, double fallback) {
    return values.empty() ? std::vector<double>{fallback} : values;
  };
  const bool default_s = base.model.s_reg == default_regularity(base.model.beta, base.model.large_data);
  std::vector<RunConfig> configs;
  for (double beta : axis(base.sweep.beta, base.model.beta)) {
    for (double gamma : axis(base.sweep.gamma, base.model.gamma)) {
      for (double amplitude : axis(base.sweep.amplitude, base.data.amplitude)) {
        RunConfig c = base;
        c.sweep = {};
        c.model.beta = beta;
        c.model.gamma = gamma;
        if (default_s) c.model.s_reg = default_regularity(beta, c.model.large_data);
        c.data.amplitude = amplitude;
        if (!base.sweep.s1.empty()) c.outputs.s1 = base.sweep.s1;
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu", configs.size());
        c.outputs.directory = base.outputs.directory + "/" + name;
        configs.push_back(std::move(c));
      }
    }
  }
  return configs;
}

std::vector<SweepRow> run_sweep(const RunConfig& base, int workers, const RunSink& sink) {
  const auto configs = expand_sweep(base);
  std::vector<std::optional<ExperimentResult>> results(configs.size());
  std::vector<std::string> errors(configs.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = run_experiment(configs[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      if (sink) {
        std::lock_guard lock(sink_mutex);
        sink(i, configs[i], results[i] ? &*results[i] : nullptr, errors[i]);
      }
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::clamp<long>(workers, 1, static_cast<long>(configs.size())));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& c = configs[i];
    for (double s1 : c.outputs.s1) {
      SweepRow row;
      row.beta = c.model.beta;
      row.gamma = c.model.gamma;
      row.amplitude = c.data.amplitude;
      row.s1 = s1;
      row.predicted = predicted_exponent(s1, c.model.beta);
      row.run_directory = c.outputs.directory;
      row.fitted = std::numeric_limits<double>::quiet_NaN();
      row.abs_gap = row.rel_gap = std::numeric_limits<double>::quiet_NaN();
      if (!results[i]) {
        row.status = "error: " + errors[i];
      } else {
        const auto& res = *results[i];
        const auto it = std::find_if(res.fits.begin(), res.fits.end(),
                                     [s1](const FitEntry& f) { return f.s1 == s1; });
        if (res.run.status != RunStatus::kOk) {
          row.status = std::string(to_string(res.run.status)) + ": " + res.run.message;
        } else if (it == res.fits.end() || !it->fit) {
          row.status = "fit_failed: " + (it == res.fits.end() ? std::string("missing") : it->error);
        } else {
          row.status = "ok";
        }
        if (it != res.fits.end() && it->fit) {
          row.fitted = it->fit->exponent;
          row.abs_gap = std::abs(row.fitted - row.predicted);
          row.rel_gap = row.abs_gap / std::abs(row.predicted);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace hypocns
