#include "hypocns/cli.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <stdexcept>

#include "hypocns/config.hpp"
#include "hypocns/errors.hpp"
#include "hypocns/experiments.hpp"
#include "hypocns/io.hpp"
#include "hypocns/linear_oracle.hpp"

namespace hypocns {

namespace fs = std::filesystem;

namespace {

RunConfig resolve(const CliOptions& options) {
  RunConfig config = options.config_path ? load_config(*options.config_path) : RunConfig{};
  if (options.out_dir) config.outputs.directory = *options.out_dir;
  if (options.plots) config.outputs.plots = *options.plots;
  return config;
}

// Invalid input maps to 2, everything else that escapes to 1.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

void persist_run(const fs::path& dir, const RunConfig& config, const ExperimentResult& result) {
  write_trajectory_csv(dir / "trajectory.csv", result.run.samples, config.outputs.s1);
  write_text(dir / "fits.json", fits_to_json(result.fits, config.fit_window()));
  write_text(dir / "report.json", run_report_to_json(result));
  if (config.outputs.plots) write_text(dir / "decay.svg", decay_svg(result.run.samples, result.fits));
}

}  // namespace

int cmd_run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = resolve(options);
    config.model.validate();
    const fs::path dir = config.outputs.directory;
    fs::create_directories(dir);
    save_config(config, dir / "config.json");

    const auto result = run_experiment(config);
    persist_run(dir, config, result);
    for (const auto& w : result.run.warnings) err << "warning: " << w << '\n';
    out << "status " << to_string(result.run.status) << ", " << result.run.samples.size()
        << " samples, " << result.run.steps << " steps\n";
    for (const auto& f : result.fits) {
      if (f.fit) {
        out << "s1 = " << f.s1 << ": exponent " << f.fit->exponent << " (predicted " << f.predicted
            << ", r^2 " << f.fit->r_squared << ")\n";
      } else {
        out << "s1 = " << f.s1 << ": no fit (" << f.error << ")\n";
      }
    }
    if (result.run.status != RunStatus::kOk) {
      err << "run stopped: " << result.run.message << '\n';
      return kExitRuntime;
    }
    return kExitOk;
  });
}

int cmd_oracle(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = resolve(options);
    config.model.validate();
    const auto& o = config.oracle;
    const double ref = lower_bound_constant_squared(o.ref_c0, o.ref_eta, o.ref_s1, o.ref_beta);
    out << "C_beta^2(c0=" << o.ref_c0 << ", eta=" << o.ref_eta << ", s1=" << o.ref_s1
        << ", beta=" << o.ref_beta << ") = " << format_double(ref) << '\n';

    const fs::path dir = config.outputs.directory;
    fs::create_directories(dir);
    save_config(config, dir / "config.json");
    if (o.times.empty()) {
      write_text(dir / "oracle.json", oracle_report_to_json(o, ref, nullptr));
      return kExitOk;
    }

    const auto grid = SpectralGrid::create(config.grid.n_points, config.grid.domain_length);
    const auto data = generate_initial_data(config.data, grid, config.model);
    const auto report = linear_lower_bound_check(data.state, config.model, o.s1, o.times, o.threshold);
    write_text(dir / "oracle.json", oracle_report_to_json(o, ref, &report));

    // Linear trajectory: norms of the exact linear evolution at the requested times.
    std::vector<FunctionalSample> samples;
    const FunctionalSuite suite(grid, config.model, config.outputs.s1);
    for (double t : o.times) samples.push_back(suite(linear_evolve(data.state, t, config.model)));
    write_trajectory_csv(dir / "linear_trajectory.csv", samples, config.outputs.s1);

    out << "lower bound: c0 " << report.c0 << ", eta " << report.eta << ", C_beta^2 "
        << report.constant_squared << ", min ratio " << report.min_ratio << '\n';
    if (!report.passed) {
      err << "lower bound ratio below " << report.threshold << " at t =";
      for (const auto& e : report.entries) {
        if (e.ratio < report.threshold) err << ' ' << e.time;
      }
      err << '\n';
      return kExitRuntime;
    }
    return kExitOk;
  });
}

int cmd_sweep(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = resolve(options);
    const fs::path dir = config.outputs.directory;
    fs::create_directories(dir);
    save_config(config, dir / "config.json");

    const auto sink = [&](std::size_t index, const RunConfig& run_config, const ExperimentResult* result,
                          const std::string& error) {
      const fs::path run_dir = run_config.outputs.directory;
      fs::create_directories(run_dir);
      save_config(run_config, run_dir / "config.json");
      if (result != nullptr) {
        persist_run(run_dir, run_config, *result);
      } else {
        write_text(run_dir / "error.txt", error + "\n");
      }
      out << "run " << index << " finished" << (result ? "" : " with error: " + error) << '\n';
    };
    const auto rows = run_sweep(config, options.workers, sink);
    write_summary_csv(dir / "summary.csv", rows);

    int code = kExitOk;
    for (const auto& r : rows) {
      if (r.status != "ok" || !(r.rel_gap <= options.tolerance)) {
        err << "beta " << r.beta << ", gamma " << r.gamma << ", amplitude " << r.amplitude << ", s1 "
            << r.s1 << ": " << r.status << ", relative gap " << r.rel_gap << '\n';
        code = kExitRuntime;
      }
    }
    return code;
  });
}

int cmd_fit(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig config;
    fs::path dir;
    if (options.config_path) {
      config = load_config(*options.config_path);
      dir = options.out_dir ? fs::path(*options.out_dir) : fs::path(config.outputs.directory);
    } else {
      if (!options.out_dir) throw ConfigError("fit needs --out <run directory> or --config");
      dir = *options.out_dir;
      config = load_config(dir / "config.json");
    }
    const auto table = read_trajectory_csv(dir / "trajectory.csv");
    const auto fits = fit_trajectory(table.samples, config.outputs.s1, config.model.beta, config.fit_window());
    write_text(dir / "refit.json", fits_to_json(fits, config.fit_window()));
    int code = kExitOk;
    for (const auto& f : fits) {
      if (f.fit) {
        out << "s1 = " << f.s1 << ": exponent " << f.fit->exponent << " (predicted " << f.predicted << ")\n";
      } else {
        err << "s1 = " << f.s1 << ": " << f.error << '\n';
        code = kExitRuntime;
      }
    }
    return code;
  });
}

}  // namespace hypocns
