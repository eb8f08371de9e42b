#include "sdlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdlab/random.hpp"

namespace sdlab {

void GinzburgLandauParams::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !(x0 > 0.0))
    throw std::invalid_argument("ginzburg-landau: a, b and x0 must be > 0");
  if (!(c >= 0.0)) throw std::invalid_argument("ginzburg-landau: c must be >= 0");
}

double gl_drift(double x, const GinzburgLandauParams& params) {
  return params.a * x * (params.b - x * x);
}

double gl_diffusion(double x, const GinzburgLandauParams& params) {
  return params.c * x;
}

FrozenCoefficients gl_freeze(double y_n, const GinzburgLandauParams& params) {
  return {params.a * (params.b - y_n * y_n), params.c};
}

ScalarSdeModel make_ginzburg_landau(const GinzburgLandauParams& params) {
  params.validate();
  return ScalarSdeModel{
      "ginzburg-landau",
      [params](double, double x) { return gl_drift(x, params); },
      [params](double, double x) { return gl_diffusion(x, params); },
      [params](double, double x) { return gl_freeze(x, params); },
  };
}

namespace {

double relative_error(double value, double expected) {
  const double scale = std::max(std::abs(value), std::abs(expected));
  if (scale == 0.0) return 0.0;
  return std::abs(value - expected) / scale;
}

}  // namespace

ConsistencyReport consistency_check(const ScalarSdeModel& model,
                                    std::size_t sample_count,
                                    std::uint64_t seed, double x_range) {
  if (sample_count == 0) throw std::invalid_argument("empty sample");

  auto rng = derive_stream(seed, 0x636f6e73);  // "cons"
  std::uniform_real_distribution<double> time_dist(0.0, 1.0);
  std::uniform_real_distribution<double> state_dist(-x_range, x_range);

  ConsistencyReport report;
  report.samples = sample_count;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double t = time_dist(rng);
    const double x = state_dist(rng);
    const auto frozen = model.freeze(t, x);
    const double err = std::max(relative_error(frozen.alpha * x, model.drift(t, x)),
                                relative_error(frozen.beta * x, model.diffusion(t, x)));
    report.worst_relative_error = std::max(report.worst_relative_error, err);
    if (err > kConsistencyTolerance && report.passed) {
      report.passed = false;
      report.fail_t = t;
      report.fail_x = x;
    }
  }
  return report;
}

KhasminskiiReport khasminskii_check(const ScalarSdeModel& model, double p,
                                    double c_k, double x_min, double x_max,
                                    double grid_step) {
  if (!(p >= 2.0)) throw std::invalid_argument("khasminskii: p must be >= 2");
  if (!(grid_step > 0.0)) throw std::invalid_argument("khasminskii: grid_step must be > 0");
  if (!(x_min < x_max)) throw std::invalid_argument("khasminskii: need x_min < x_max");

  KhasminskiiReport report;
  report.p = p;
  report.c_k = c_k;
  report.worst_ratio = -std::numeric_limits<double>::infinity();

  // Index-based grid so the endpoints are hit without accumulated drift.
  const auto n = static_cast<std::size_t>(std::floor((x_max - x_min) / grid_step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = std::min(x_min + static_cast<double>(i) * grid_step, x_max);
    const double b = model.diffusion(0.0, x);
    const double lhs = x * model.drift(0.0, x) + 0.5 * (p - 1.0) * b * b;
    const double ratio = lhs / (1.0 + x * x);
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_x = x;
    }
  }
  report.passed = report.worst_ratio <= c_k;
  return report;
}

}  // namespace sdlab
