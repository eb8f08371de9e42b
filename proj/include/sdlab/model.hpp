#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace sdlab {

/// Coefficients of the inner linear SDE dy = alpha*y ds + beta*y dW that a
/// freeze produces for one step.
struct FrozenCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
};

using CoefficientFn = std::function<double(double t, double x)>;
using FreezeFn = std::function<FrozenCoefficients(double t, double x)>;

/// A scalar SDE dx = drift(t,x) dt + diffusion(t,x) dW together with the
/// freeze that splits each coefficient into a discretized factor and a
/// linear factor in the live state.
///
/// The freeze must satisfy alpha(t,x)*x == drift(t,x) and
/// beta(t,x)*x == diffusion(t,x); consistency_check samples this.
struct ScalarSdeModel {
  std::string name;
  CoefficientFn drift;
  CoefficientFn diffusion;
  FreezeFn freeze;
};

struct GinzburgLandauParams {
  double a = 0.1;
  double b = 1.0;
  double c = 0.2;
  double x0 = 2.0;

  /// Throws std::invalid_argument unless a, b, x0 > 0 and c >= 0. c == 0 is
  /// the deterministic limit and is accepted.
  void validate() const;

  bool operator==(const GinzburgLandauParams&) const = default;
};

double gl_drift(double x, const GinzburgLandauParams& params);
double gl_diffusion(double x, const GinzburgLandauParams& params);
FrozenCoefficients gl_freeze(double y_n, const GinzburgLandauParams& params);

/// The stochastic Ginzburg-Landau equation dx = a x (b - x^2) dt + c x dW
/// with freeze f = a(b - x^2) y, g = c y.
ScalarSdeModel make_ginzburg_landau(const GinzburgLandauParams& params);

struct ConsistencyReport {
  bool passed = true;
  double worst_relative_error = 0.0;
  std::size_t samples = 0;
  // First sample beyond tolerance, if any.
  std::optional<double> fail_t;
  std::optional<double> fail_x;
};

inline constexpr double kConsistencyTolerance = 1e-12;

/// Samples (t, x) with t in [0, 1] and x in [-x_range, x_range] and compares
/// alpha*x, beta*x against drift and diffusion. Throws std::invalid_argument
/// ("empty sample") when sample_count is zero.
ConsistencyReport consistency_check(const ScalarSdeModel& model,
                                    std::size_t sample_count,
                                    std::uint64_t seed,
                                    double x_range = 100.0);

struct KhasminskiiReport {
  double p = 2.0;
  double c_k = 0.0;
  double worst_ratio = 0.0;
  double worst_x = 0.0;
  bool passed = false;
};

/// Grid sampler for x*a(0,x) + (p-1)/2 * b(0,x)^2 <= c_k (1 + x^2).
KhasminskiiReport khasminskii_check(const ScalarSdeModel& model, double p,
                                    double c_k, double x_min = -100.0,
                                    double x_max = 100.0,
                                    double grid_step = 0.01);

}  // namespace sdlab
