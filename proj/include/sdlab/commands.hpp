#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sdlab/harness.hpp"

namespace sdlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitNothingToRun = 3,
};

inline constexpr const char* kResultsCsvHeader =
    "scheme,delta,m_paths,mse_sup,mse_end,rmse_sup,rmse_end,ci_half_width,"
    "positivity_fraction,diverged_count";

/// Flag overrides applied on top of the config file.
struct Overrides {
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<ErrorMode> error_mode;
  bool force_tem_step = false;
};

void write_results_csv(std::ostream& out, const std::vector<ErrorStats>& stats);

/// Header "t,y,x": scheme iterate and the coupled reference at the scheme's
/// nodes.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Trajectory& ref);

/// Runs the experiment in `config_path` and writes the results CSV to
/// `out_path` ("-" for stdout). Prints a summary with fitted slopes to `log`.
int cmd_run(const std::string& config_path, const std::string& out_path,
            const Overrides& overrides, std::ostream& log, std::ostream& err);

/// One coupled trajectory of `scheme` at `delta` on path `path_index`.
int cmd_path(const std::string& config_path, const std::string& scheme, double delta,
             std::uint64_t path_index, const std::string& out_path, const Overrides& overrides,
             std::ostream& log, std::ostream& err);

/// Runs the assumption-check suite; exit 0 iff every check passes.
int cmd_check(const std::string& config_path, std::ostream& log, std::ostream& err);

}  // namespace sdlab
