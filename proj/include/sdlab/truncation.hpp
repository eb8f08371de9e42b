#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdlab/model.hpp"

namespace sdlab {

/// Parameters of the growth bound mu(u) = c_bar * u^(1+gamma), the step
/// control h(delta) = c_bar + sqrt(epsilon * ln(1/delta)) and the constant
/// h_hat bounding delta^(1/6) * h(delta).
struct TruncationConfig {
  double c_bar = 0.2;
  double gamma = 2.0;
  double epsilon = 1.0 / 3.0;
  double h_hat = 1.2;

  /// Throws std::invalid_argument on c_bar <= 0, gamma <= 0, h_hat <= 0 or
  /// epsilon outside (0, 1/3]. Returns a warning when epsilon sits on the 1/3
  /// boundary. The h_hat >= max(1, mu(1)) requirement is left to
  /// admissibility_check so that the check suite can report it.
  std::optional<std::string> validate() const;

  bool operator==(const TruncationConfig&) const = default;
};

/// Truncated Euler-Maruyama parameters: radius mu^-1(delta^(-epsilon2/2)).
struct TemConfig {
  double epsilon2 = 0.5;
  double c_bar = 0.2;
  double gamma = 2.0;

  void validate() const;
  /// (8 c_bar)^(-2/epsilon2).
  double max_delta() const;
};

double h_of_delta(double delta, const TruncationConfig& cfg);
double mu_eval(double u, const TruncationConfig& cfg);
/// Inverse of mu on [mu(1), inf).
double mu_inverse(double v, const TruncationConfig& cfg);
/// mu^-1(h(delta)); nonincreasing in delta.
double threshold(double delta, const TruncationConfig& cfg);

double tem_h_bar(double delta, const TemConfig& tem);
double tem_radius(double delta, const TemConfig& tem);

/// sign(x) * min(|x|, radius), and 0 at x == 0.
double truncate_state(double x, double radius);

struct AdmissibilityReport {
  bool passed = true;
  bool h_hat_bound_ok = true;  // h_hat >= max(1, mu(1))
  double worst_margin = 0.0;  // min over samples of h_hat - delta^(1/6) h(delta)
  double worst_delta = 0.0;
};

/// Checks delta^(1/6) h(delta) <= h_hat at every sample, and
/// h_hat >= max(1, mu(1)).
AdmissibilityReport admissibility_check(const TruncationConfig& cfg,
                                        std::span<const double> delta_samples);

struct BoundedGrowthReport {
  bool passed = true;
  double worst_ratio = 0.0;  // max of (|f_D| v |g_D|) / (h(D)(1+|y|))
  std::size_t samples = 0;
  std::optional<double> fail_delta;
  std::optional<double> fail_x;
  std::optional<double> fail_y;
};

/// Samples (delta, x, y) and checks |f_D(x,y)| v |g_D(x,y)| <= h(D)(1+|y|),
/// where f_D, g_D evaluate the freeze at the truncated frozen state.
BoundedGrowthReport bounded_growth_check(const ScalarSdeModel& model,
                                         const TruncationConfig& cfg,
                                         std::size_t sample_count,
                                         std::uint64_t seed,
                                         double state_range = 100.0);

/// Log-spaced deltas in [lo, 1] used by the check suite.
std::vector<double> log_spaced_deltas(std::size_t count, double lo);

}  // namespace sdlab
