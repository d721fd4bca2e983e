#pragma once

// Subcommands behind the hypocns_cli front-end.
// Exit codes: 0 success, 1 runtime failure, 2 invalid config or violated hypothesis.

#include <iosfwd>
#include <optional>
#include <string>

namespace hypocns {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct CliOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  double tolerance = 0.1;
  std::optional<bool> plots;
  int workers = 1;
};

int cmd_run(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const CliOptions& options, std::ostream& out, std::ostream& err);
/// Re-fits <out>/trajectory.csv with the windows of <out>/config.json (or --config)
/// and writes <out>/refit.json.
int cmd_fit(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace hypocns
