#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdlab/brownian.hpp"
#include "sdlab/model.hpp"
#include "sdlab/schemes.hpp"
#include "sdlab/truncation.hpp"

namespace sdlab {

/// Invalid experiment configuration; `field` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ErrorMode { Supremum, Terminal };

std::string_view error_mode_name(ErrorMode mode);  // "sup" / "end"

struct ExperimentConfig {
  GinzburgLandauParams model;
  TruncationConfig truncation;
  double epsilon2 = 0.5;
  double horizon = 1.0;
  std::vector<SchemeKind> schemes{SchemeKind::TSD};
  std::vector<double> step_sizes;
  double ref_step = 0.0;
  std::size_t paths = 1000;
  std::uint64_t seed = 0;
  ErrorMode error_mode = ErrorMode::Terminal;
  unsigned workers = 1;
  bool force_tem_step = false;

  /// TEM parameters; c_bar and gamma are shared with the truncation block.
  TemConfig tem() const { return {epsilon2, truncation.c_bar, truncation.gamma}; }

  /// Throws ConfigError; returns warnings (e.g. epsilon on its boundary).
  std::vector<std::string> validate() const;

  /// Number of reference steps, horizon / ref_step.
  std::size_t n_fine() const;
  /// Number of steps of width delta over the horizon.
  std::size_t steps_for(double delta) const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strong-error estimates for one (scheme, delta) pair.
struct ErrorStats {
  SchemeKind scheme = SchemeKind::TSD;
  double delta = 0.0;
  std::size_t m_paths = 0;
  double mse_sup = 0.0;
  double mse_end = 0.0;
  double rmse = 0.0;           // sqrt of the mse selected by the error mode
  double ci_half_width = 0.0;  // 95% normal approximation on the selected mse
  double positivity_fraction = 0.0;
  std::size_t diverged_count = 0;

  double rmse_sup() const;
  double rmse_end() const;
};

struct ExperimentResult {
  std::vector<ErrorStats> stats;     // scheme-major, step sizes in config order
  std::vector<std::string> skipped;  // one message per rejected (scheme, delta)
  std::vector<std::string> warnings;
};

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log delta, log error)
};

struct StrongError {
  double sup_sq = 0.0;
  double end_sq = 0.0;
};

/// Closed-form solution x_t = x0 E_t / sqrt(1 + 2 a x0^2 int_0^t E_s^2 ds),
/// E_t = exp((ab - c^2/2) t + c W_t), the integral by the trapezoidal rule on
/// the fine grid. Evaluated at every fine node.
Trajectory reference_solution(const BrownianPathGrid& path, const GinzburgLandauParams& params);
Trajectory reference_solution(std::span<const double> increments, double horizon,
                              const GinzburgLandauParams& params);

/// Squared errors at the coarse nodes of `traj` against a reference on a grid
/// that refines it. Diverged trajectories give infinities.
StrongError strong_error(const Trajectory& traj, const Trajectory& ref);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// OLS of log(error) on log(delta). Throws std::invalid_argument for fewer
/// than two points or a nonpositive coordinate.
OrderFit fit_order(std::span<const std::pair<double, double>> points);

struct MomentRow {
  double delta = 0.0;
  double max_moment = 0.0;  // max over nodes of the sample mean of |y_n|^p
};

/// TSD p-th moment diagnostic. Deltas need only divide the horizon; each
/// delta uses its own uncoupled increments. Uses cfg.paths paths (>= 1).
std::vector<MomentRow> moment_diagnostic(const ExperimentConfig& cfg, double p,
                                         std::span<const double> deltas);

struct IncrementRow {
  double delta = 0.0;
  double mean_max_displacement = 0.0;  // sample mean of max_n |y_mid - y_n|^2
};

/// TSD within-step displacement diagnostic at step midpoints, one row per
/// cfg.step_sizes entry. Each step must span at least two reference steps.
std::vector<IncrementRow> increment_scaling_diagnostic(const ExperimentConfig& cfg);

}  // namespace sdlab
