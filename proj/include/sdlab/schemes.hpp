#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdlab/model.hpp"
#include "sdlab/truncation.hpp"

namespace sdlab {

enum class SchemeKind { SD, TSD, TEM, EM };

/// "sd", "tsd", "tem", "em".
std::string_view scheme_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);

/// Raised when a scheme refuses a step size (TEM above its bound, TSD above 1).
class SchemeRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  std::optional<SchemeKind> scheme;  // empty for a reference solution
  double step = 0.0;
  std::vector<double> values;  // nodes t_0..t_N
  bool diverged = false;       // some value is not finite

  std::size_t n_steps() const { return values.empty() ? 0 : values.size() - 1; }
};

/// Everything a one-step map may consult.
struct SchemeContext {
  const ScalarSdeModel* model = nullptr;
  TruncationConfig truncation;
  TemConfig tem;
  bool force_tem_step = false;
};

/// Exact solution at t_{n+1} of dy = alpha y ds + beta y dW started from y.
inline double sd_step(double y, double alpha, double beta, double delta, double dw) {
  return y * std::exp((alpha - 0.5 * beta * beta) * delta + beta * dw);
}

/// Semi-discrete step with the freeze evaluated at the untruncated state.
double sd_model_step(double y, double t_n, double delta, double dw,
                     const ScalarSdeModel& model);

/// Truncated semi-discrete step: the freeze sees truncate_state(y, threshold)
/// while the multiplicand stays y. Throws SchemeRejected for delta > 1.
double tsd_step(double y, double delta, double dw, const ScalarSdeModel& model,
                const TruncationConfig& cfg, double t_n = 0.0);

/// Truncated Euler-Maruyama step with radius mu^-1(delta^(-epsilon2/2)).
/// Throws SchemeRejected for delta > tem.max_delta() unless force is set.
double tem_step(double y, double delta, double dw, const ScalarSdeModel& model,
                const TemConfig& tem, bool force = false, double t_n = 0.0);

double em_step(double y, double t_n, double delta, double dw, const ScalarSdeModel& model);

/// Checks that `kind` accepts `delta`; throws SchemeRejected otherwise.
void check_step_admissible(SchemeKind kind, double delta, const SchemeContext& ctx);

/// Iterates the scheme over `increments` (one per step of width
/// horizon / increments.size()) starting from x0.
Trajectory simulate(SchemeKind kind, const SchemeContext& ctx,
                    std::span<const double> increments, double horizon, double x0);

}  // namespace sdlab
