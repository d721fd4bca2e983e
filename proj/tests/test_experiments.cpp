#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypocns/errors.hpp"
#include "hypocns/experiments.hpp"

using namespace hypocns;
using std::numbers::pi;

namespace {

ModelParams params(double beta = 0.6, bool large = false) {
  ModelParams p;
  p.beta = beta;
  p.large_data = large;
  p.s_reg = default_regularity(beta, large);
  return p;
}

std::vector<std::pair<double, double>> series(double (*f)(double)) {
  std::vector<std::pair<double, double>> out;
  for (double t = 0.0; t <= 1000.0; t += 5.0) out.emplace_back(t, f(t));
  return out;
}

// Uniformly sampled synthetic trajectory.
template <class Fill>
std::vector<FunctionalSample> synthetic(double h, int n, Fill fill) {
  std::vector<FunctionalSample> tr(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    tr[static_cast<std::size_t>(i)].time = i * h;
    fill(tr[static_cast<std::size_t>(i)], i * h);
  }
  return tr;
}

RunConfig small_run_config() {
  RunConfig c;
  c.grid = {1024, 100 * pi};
  c.stepper.t_end = 20.0;
  c.stepper.sample_interval = 1.0;
  c.data.width = 5.0;
  c.outputs.s1 = {0.0, 0.3};
  c.outputs.fit_window = std::pair{2.0, 20.0};
  return c;
}

}  // namespace

TEST_CASE("data kind names") {
  for (auto k : {DataKind::kSmallGaussian, DataKind::kNonzeroMass, DataKind::kLargeL2Flat,
                 DataKind::kZeroMassOscillatory, DataKind::kCustomModes}) {
    CHECK(data_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(data_kind_from_string("gaussian"), SpecError);
}

TEST_CASE("small Gaussian datum") {
  const auto g = SpectralGrid::create(4096, 400 * pi);
  InitialDataSpec spec;
  spec.amplitude = 1e-3;
  spec.width = 1.0;
  const auto d = generate_initial_data(spec, g, params());
  CHECK(d.report.hs_norm < 1e-2);
  const double mass = 1e-3 * std::sqrt(2 * pi);
  CHECK(d.report.mass_a == doctest::Approx(mass).epsilon(1e-10));
  CHECK(d.report.mass_u == doctest::Approx(mass).epsilon(1e-10));
  // ||(a,u)||_{L^2}^2 = 2 A^2 w sqrt(pi)
  CHECK(d.report.l2_norm == doctest::Approx(std::sqrt(2 * 1e-6 * std::sqrt(pi))).epsilon(1e-10));
  CHECK(d.report.besov_neg_half > 0.0);
}

TEST_CASE("large flat datum") {
  const auto g = SpectralGrid::create(4096, 8000.0);
  InitialDataSpec spec;
  spec.kind = DataKind::kLargeL2Flat;
  spec.amplitude = 0.5;
  spec.width = 100.0;
  const auto d = generate_initial_data(spec, g, params(0.6, true));
  CHECK(d.report.l2_norm == doctest::Approx(0.5 * std::sqrt(200.0)).epsilon(1e-6));
  // int sech^2 tanh^2 (x/W) dx / W^2 = 2 / (3 W)
  CHECK(sobolev_norm(d.state.a, 1.0) == doctest::Approx(0.5 * std::sqrt(2.0 / 300.0)).epsilon(1e-6));
  CHECK(d.state.u.l2_norm() == 0.0);

  spec.target_norms["l2"] = 3.0;
  spec.amplitude = 99.0;  // overridden by the target
  const auto t = generate_initial_data(spec, g, params(0.6, true));
  CHECK(t.report.l2_norm == doctest::Approx(3.0).epsilon(1e-6));

  spec.width = 2500.0;
  CHECK_THROWS_AS(generate_initial_data(spec, g, params(0.6, true)), SpecError);
  spec.width = 20.0;
  spec.target_norms["gradient"] = 1e-3;
  CHECK_THROWS_AS(generate_initial_data(spec, g, params(0.6, true)), SpecError);
  spec.target_norms = {{"h1", 1.0}};
  CHECK_THROWS_AS(generate_initial_data(spec, g, params(0.6, true)), SpecError);
}

TEST_CASE("zero-mass and custom-mode data") {
  const auto g = SpectralGrid::create(2048, 200 * pi);
  InitialDataSpec spec;
  spec.kind = DataKind::kZeroMassOscillatory;
  spec.amplitude = 1e-3;
  spec.width = 5.0;
  const auto z = generate_initial_data(spec, g, params());
  CHECK(z.report.mass_a == 0.0);
  CHECK(z.report.mass_u == 0.0);
  double peak = 0.0;
  for (double v : z.state.a.physical()) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(1e-3).epsilon(1e-3));

  InitialDataSpec modes;
  modes.kind = DataKind::kCustomModes;
  modes.seed = 42;
  modes.modes = {{3, 1e-3, 0.0}, {10, 5e-4, 2e-4}};
  const auto m1 = generate_initial_data(modes, g, params());
  const auto m2 = generate_initial_data(modes, g, params());
  CHECK(m1.state.a.physical() == m2.state.a.physical());
  CHECK(m1.state.u.physical() == m2.state.u.physical());
  CHECK(std::abs(m1.state.a[3]) == doctest::Approx(0.5e-3).epsilon(1e-12));
  modes.seed = 43;
  const auto m3 = generate_initial_data(modes, g, params());
  CHECK(m1.state.a.physical() != m3.state.a.physical());
  modes.modes = {{2000, 1.0, 0.0}};
  CHECK_THROWS_AS(generate_initial_data(modes, g, params()), SpecError);

  spec.kind = DataKind::kSmallGaussian;
  spec.width = 100.0;  // 16 w > L
  CHECK_THROWS_AS(generate_initial_data(spec, g, params()), SpecError);
  spec.width = 0.1;  // below two grid spacings
  CHECK_THROWS_AS(generate_initial_data(spec, g, params()), SpecError);
}

TEST_CASE("power-law fits") {
  const auto exact = fit_decay_exponent(series([](double t) { return std::pow(1 + t, -0.4); }), {100, 1000});
  CHECK(exact.exponent == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.n_samples == 181);

  const auto scaled = fit_decay_exponent(series([](double t) { return 3 * std::pow(1 + t, -0.75); }), {100, 1000});
  CHECK(scaled.exponent == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(scaled.prefactor == doctest::Approx(3.0).epsilon(1e-10));

  // two full periods of the perturbation in log(1+t)
  std::vector<std::pair<double, double>> wavy;
  for (int i = 0; i <= 400; ++i) {
    const double t = std::expm1(4 * pi * i / 400);
    wavy.emplace_back(t, std::pow(1 + t, -0.4) * (1 + 0.05 * std::sin(std::log1p(t))));
  }
  const auto perturbed = fit_decay_exponent(wavy, {0.0, wavy.back().first});
  CHECK(std::abs(perturbed.exponent + 0.4) <= 0.02);
  CHECK(perturbed.r_squared > 0.99);

  CHECK_THROWS_AS(fit_decay_exponent(series([](double t) { return std::pow(1 + t, -0.4); }), {990, 1000}),
                  PreconditionError);
  CHECK_THROWS_AS(fit_decay_exponent(series([](double t) { return t > 500 ? 0.0 : 1.0; }), {100, 1000}),
                  DomainError);
  CHECK_THROWS_AS(fit_decay_exponent({}, {10, 1}), PreconditionError);
}

TEST_CASE("predicted exponents") {
  CHECK(predicted_exponent(0.0, 0.55) == doctest::Approx(-0.4545).epsilon(1e-4));
  CHECK(predicted_exponent(0.0, 0.6) == doctest::Approx(-0.4167).epsilon(1e-4));
  CHECK(predicted_exponent(0.0, 0.7) == doctest::Approx(-0.3571).epsilon(1e-4));
  CHECK(predicted_exponent(0.6, 0.6) == doctest::Approx(-0.9167).epsilon(1e-4));
  CHECK(predicted_exponent(0.3, 0.6) == doctest::Approx(-0.6667).epsilon(1e-4));
}

TEST_CASE("Lyapunov verification on synthetic trajectories") {
  const auto zero = synthetic(1.0, 20, [](FunctionalSample&, double) {});
  const auto rz = verify_lyapunov(zero, LyapunovOrder::kOrder0);
  CHECK(rz.passed);
  CHECK(rz.max_residual == 0.0);

  const auto decaying = synthetic(0.1, 50, [](FunctionalSample& s, double t) {
    s.script_E1 = std::exp(-t);
    s.script_D1 = 0.5 * std::exp(-t);
  });
  const auto rd = verify_lyapunov(decaying, LyapunovOrder::kOrder1);
  CHECK(rd.passed);
  CHECK(rd.max_residual == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(rd.n_checked == 46);

  const auto injected = synthetic(0.1, 50, [](FunctionalSample& s, double t) {
    s.script_E0 = std::exp(-t) + (t > 2.0 ? 0.05 * (t - 2.0) : 0.0);
    s.script_D0 = std::exp(-t);
  });
  const auto ri = verify_lyapunov(injected, LyapunovOrder::kOrder0);
  CHECK_FALSE(ri.passed);
  CHECK(ri.worst_time > 2.0);

  auto uneven = decaying;
  uneven[3].time += 0.01;
  CHECK_THROWS_AS(verify_lyapunov(uneven, LyapunovOrder::kOrder1), PreconditionError);
  CHECK_THROWS_AS(verify_lyapunov(synthetic(1.0, 2, [](FunctionalSample&, double) {}), LyapunovOrder::kOrder0),
                  PreconditionError);
}

TEST_CASE("energy identity on synthetic trajectories") {
  const auto exact = synthetic(0.1, 40, [](FunctionalSample& s, double t) {
    s.E0 = 2 * std::exp(-t);  // physical energy e^{-t}
    s.viscous_dissipation = std::exp(-t);
  });
  const auto r = verify_energy_identity(exact);
  CHECK(r.passed);
  CHECK(r.max_residual < 1e-5);

  const auto leaky = synthetic(0.1, 40, [](FunctionalSample& s, double t) {
    s.E0 = 2 * std::exp(-t);
    s.viscous_dissipation = 1.01 * std::exp(-t);
  });
  CHECK_FALSE(verify_energy_identity(leaky).passed);
}

TEST_CASE("intermediate bound verification") {
  const auto p = params(0.6, true);
  const auto zero = synthetic(10.0, 30, [](FunctionalSample&, double) {});
  const auto rz = verify_intermediate_bound(zero, p, {30, 290}, 3.0);
  CHECK(rz.vacuous);
  CHECK(rz.passed);

  const auto sharp = synthetic(1.0, 1001, [](FunctionalSample& s, double t) { s.script_E1 = 0.1 * std::pow(1 + t, -1 / 0.6); });
  const auto rs = verify_intermediate_bound(sharp, p, {100, 1000}, 3.0);
  CHECK(rs.passed);
  REQUIRE(rs.fit.has_value());
  CHECK(rs.fit->exponent == doctest::Approx(-1 / 1.2).epsilon(1e-10));
  CHECK(rs.threshold == doctest::Approx(-1 / 1.2 + 0.05 / 1.2));
  CHECK(rs.power_constant == doctest::Approx(std::pow(0.1, -0.6) / 0.6).epsilon(1e-4));

  const auto slow = synthetic(1.0, 1001, [](FunctionalSample& s, double t) { s.script_E1 = 0.1 * std::pow(1 + t, -1.0); });
  CHECK_FALSE(verify_intermediate_bound(slow, p, {100, 1000}, 3.0).passed);

  const auto mismatch = verify_intermediate_bound(sharp, p, {100, 1000}, 1e-3);
  CHECK_FALSE(mismatch.regime_ok);
  CHECK_FALSE(mismatch.passed);
  CHECK(mismatch.message.find("regime mismatch") != std::string::npos);
}

TEST_CASE("conservation report") {
  const auto steady = synthetic(1.0, 10, [](FunctionalSample& s, double) {
    s.mean_a = 0.25;
    s.momentum = 2.0;
    s.E0 = 1.0;
  });
  CHECK(check_conservation(steady, 10.0).passed);

  auto drift = steady;
  drift[5].mean_a += 1e-12;
  CHECK_FALSE(check_conservation(drift, 10.0).passed);

  auto zero_momentum = synthetic(1.0, 10, [](FunctionalSample& s, double t) {
    s.E0 = 4.0;
    s.momentum = t * 1e-11;
  });
  const auto r = check_conservation(zero_momentum, 25.0);
  CHECK(r.momentum_scale == doctest::Approx(10.0));
  CHECK(r.momentum_drift == doctest::Approx(9e-12));
  CHECK(r.passed);
}

TEST_CASE("regime guards and the k audit") {
  InitialDataReport small;
  small.hs_norm = 1e-3;
  auto checks = regime_guards(small, params(), {});
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].passed);
  small.hs_norm = 0.5;
  CHECK_FALSE(regime_guards(small, params(), {})[0].passed);

  InitialDataReport large;
  large.l2_norm = 3.0;
  large.gradient_norm = 5e-3;
  ModelParams lp = params(0.6, true);
  for (const auto& c : regime_guards(large, lp, {})) CHECK(c.passed);
  lp.beta = 0.8;
  bool beta_flagged = false;
  for (const auto& c : regime_guards(large, lp, {})) beta_flagged |= c.name == "large_data_beta" && !c.passed;
  CHECK(beta_flagged);

  const auto g = SpectralGrid::create(2048, 200 * pi);
  const double c = 100 * pi;
  const State s(Field::from_function(g, [c](double x) { return 1e-3 * std::exp(-(x - c) * (x - c) / 50); }),
                Field::from_function(g, [c](double x) { return 1e-3 * (x - c) / 5 * std::exp(-(x - c) * (x - c) / 50); }));
  const auto ok = audit_k(s, params());
  CHECK(ok.passed);
  CHECK(ok.halvings == 0);
  CHECK(ok.ratio >= 0.5);
  CHECK(ok.ratio <= 2.0);

  ModelParams big_k = params();
  big_k.k_cross = 1e3;
  const auto halved = audit_k(s, big_k);
  CHECK(halved.passed);
  CHECK(halved.halvings > 0);
  CHECK(halved.k_final == doctest::Approx(1e3 * std::ldexp(1.0, -halved.halvings)));
}

TEST_CASE("small-data run: Lyapunov, energy identity and exponent ordering") {
  RunConfig c;
  c.stepper.t_end = 200.0;
  c.stepper.sample_interval = 0.25;
  c.outputs.s1 = {0.0, 0.3, 0.6};
  const auto r = run_experiment(c);
  REQUIRE(r.run.status == RunStatus::kOk);
  CHECK(r.k_audit.passed);
  CHECK(r.conservation.passed);
  CHECK(verify_lyapunov(r.run.samples, LyapunovOrder::kOrder0).passed);
  CHECK(verify_lyapunov(r.run.samples, LyapunovOrder::kOrder1).passed);
  CHECK(verify_energy_identity(r.run.samples).passed);
  REQUIRE(r.fits.size() == 3);
  for (const auto& f : r.fits) REQUIRE(f.fit.has_value());
  CHECK(r.fits[0].fit->exponent > r.fits[1].fit->exponent);
  CHECK(r.fits[1].fit->exponent > r.fits[2].fit->exponent);
  const auto inter = verify_intermediate_bound(r.run.samples, c.model, c.fit_window(), r.data_report.l2_norm);
  CHECK_FALSE(inter.regime_ok);
}

TEST_CASE("run_experiment guards and reproducibility") {
  RunConfig c = small_run_config();
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  REQUIRE(a.run.samples.size() == b.run.samples.size());
  for (std::size_t i = 0; i < a.run.samples.size(); ++i) {
    CHECK(a.run.samples[i].script_E0 == b.run.samples[i].script_E0);
    CHECK(a.run.samples[i].sobolev(0.0) == b.run.samples[i].sobolev(0.0));
  }

  RunConfig big = c;
  big.data.amplitude = 0.5;
  CHECK_THROWS_AS(run_experiment(big), ConfigError);
  big.guards.enforce = false;
  CHECK_NOTHROW(run_experiment(big));

  RunConfig large = c;
  large.model = params(0.9, true);
  CHECK_THROWS_AS(run_experiment(large), ParameterError);
}

TEST_CASE("sweep expansion and execution") {
  RunConfig base = small_run_config();
  base.outputs.directory = "sweep_dir";
  base.sweep.beta = {0.55, 0.6, 0.7};
  const auto configs = expand_sweep(base);
  REQUIRE(configs.size() == 3);
  CHECK(configs[0].model.beta == 0.55);
  CHECK(configs[2].model.s_reg == 0.7);
  CHECK(configs[1].outputs.directory == "sweep_dir/run_001");
  CHECK(configs[1].sweep == SweepGrid{});

  base.sweep.gamma = {1.4, 2.0};
  CHECK(expand_sweep(base).size() == 6);

  RunConfig s1_sweep = small_run_config();
  s1_sweep.sweep.s1 = {0.0, 0.3, 0.6};
  const auto rows = run_sweep(s1_sweep, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].predicted == doctest::Approx(-0.4167).epsilon(1e-4));
  CHECK(rows[1].predicted == doctest::Approx(-0.6667).epsilon(1e-4));
  CHECK(rows[2].predicted == doctest::Approx(-0.9167).epsilon(1e-4));
  for (const auto& r : rows) CHECK(r.status == "ok");

  // one-point grid equals a single run; the worker count does not matter
  const RunConfig single = small_run_config();
  const auto direct = run_experiment(single);
  const auto one = run_sweep(single, 1);
  const auto two = run_sweep(single, 4);
  REQUIRE(one.size() == 2);
  CHECK(one[0].fitted == direct.fits[0].fit->exponent);
  CHECK(one[1].fitted == direct.fits[1].fit->exponent);
  CHECK(two[0].fitted == one[0].fitted);

  RunConfig failing = small_run_config();
  failing.sweep.amplitude = {1e-3, 0.5};
  std::vector<std::size_t> seen;
  const auto mixed = run_sweep(failing, 2, [&](std::size_t i, const RunConfig&, const ExperimentResult* res,
                                                const std::string& err) {
    seen.push_back(i);
    CHECK((res == nullptr) == !err.empty());
  });
  CHECK(seen.size() == 2);
  REQUIRE(mixed.size() == 4);
  CHECK(mixed[0].status == "ok");
  CHECK(mixed[2].status.rfind("error", 0) == 0);
  CHECK(std::isnan(mixed[2].fitted));
}
