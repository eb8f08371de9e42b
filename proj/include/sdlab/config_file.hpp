#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include "sdlab/harness.hpp"

namespace sdlab {

/// Malformed configuration text. `line` is 1-based, 0 when the problem is
/// not tied to a line (e.g. a missing required key).
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(std::size_t line, std::string field, const std::string& message);
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Parses the sectioned key/value format:
///
///   # comment
///   [model]        preset, a, b, c, x0
///   [truncation]   c_bar, gamma, epsilon, h_hat
///   [tem]          epsilon2
///   [experiment]   horizon, schemes, step_sizes, ref_step, paths, seed,
///                  error_mode, workers
///
/// Reals accept decimal notation or a "p/q" fraction. Lists are
/// comma-separated. step_sizes and ref_step are required; other keys fall back
/// to the ExperimentConfig defaults. Unknown sections and keys are rejected.
/// Does not run ExperimentConfig::validate.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every key, reals at 17 significant digits.
std::string serialize_config(const ExperimentConfig& cfg);

/// Shortest-round-trip-safe rendering: 17 significant digits, '.' decimal
/// separator regardless of locale.
std::string format_real(double value);

}  // namespace sdlab
