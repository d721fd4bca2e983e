#pragma once

// Run artifacts: trajectory CSV (frozen column order, 17 significant digits),
// fits and report JSON, sweep summary CSV and a static SVG decay plot.
//
// trajectory.csv columns:
//   time, E0, E_s, script_E0, script_D0, script_E1, script_D1,
//   sobolev_<s1> for each requested s1 (shortest round-trip spelling),
//   besov_neg_half, low_freq_energy, mean_a, momentum, min_density, viscous_dissipation

#include <filesystem>
#include <string>
#include <vector>

#include "hypocns/experiments.hpp"
#include "hypocns/linear_oracle.hpp"

namespace hypocns {

/// %.17g
std::string format_double(double value);
/// Shortest spelling that parses back to the same double.
std::string format_key(double value);

std::vector<std::string> trajectory_columns(const std::vector<double>& s1_values);

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<FunctionalSample>& samples,
                          const std::vector<double>& s1_values);

struct TrajectoryTable {
  std::vector<double> s1_values;
  std::vector<FunctionalSample> samples;
};

/// Throws std::runtime_error on a malformed file.
TrajectoryTable read_trajectory_csv(const std::filesystem::path& path);

std::string fits_to_json(const std::vector<FitEntry>& fits, std::pair<double, double> window);
std::string run_report_to_json(const ExperimentResult& result);
std::string oracle_report_to_json(const OracleOptions& options, double reference_constant_squared,
                                  const LowerBoundReport* report);
void write_summary_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

/// Log-log plot of each s1 norm against 1+t with the fitted line and the
/// predicted slope drawn through the fit at the window start.
std::string decay_svg(const std::vector<FunctionalSample>& samples, const std::vector<FitEntry>& fits);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace hypocns
