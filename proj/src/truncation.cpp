#include "sdlab/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdlab/random.hpp"

namespace sdlab {

namespace {

constexpr double kOneThird = 1.0 / 3.0;
constexpr double kBoundaryTolerance = 1e-12;

void require_unit_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::domain_error("step size must lie in (0, 1]");
}

}  // namespace

std::optional<std::string> TruncationConfig::validate() const {
  if (!(c_bar > 0.0)) throw std::invalid_argument("truncation.c_bar must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("truncation.gamma must be > 0");
  if (!(epsilon > 0.0) || epsilon > kOneThird + kBoundaryTolerance)
    throw std::invalid_argument("truncation.epsilon must lie in (0, 1/3)");
  if (!(h_hat > 0.0)) throw std::invalid_argument("truncation.h_hat must be > 0");
  if (std::abs(epsilon - kOneThird) <= kBoundaryTolerance)
    return "truncation.epsilon = 1/3 is on the boundary of the admissible range (0, 1/3); the convergence rate is only guaranteed inside it";
  return std::nullopt;
}

void TemConfig::validate() const {
  if (!(epsilon2 > 0.0 && epsilon2 <= 1.0))
    throw std::invalid_argument("tem.epsilon2 must lie in (0, 1]");
  if (!(c_bar > 0.0)) throw std::invalid_argument("tem: c_bar must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("tem: gamma must be > 0");
}

double TemConfig::max_delta() const {
  // Reciprocal first: 1/(8*0.2) rounds to exactly 0.625, 8*0.2 does not round to 1.6.
  return std::pow(1.0 / (8.0 * c_bar), 2.0 / epsilon2);
}

double h_of_delta(double delta, const TruncationConfig& cfg) {
  require_unit_delta(delta);
  return cfg.c_bar + std::sqrt(cfg.epsilon * -std::log(delta));
}

double mu_eval(double u, const TruncationConfig& cfg) {
  if (!(u >= 0.0)) throw std::domain_error("mu: argument must be >= 0");
  return cfg.c_bar * std::pow(u, 1.0 + cfg.gamma);
}

double mu_inverse(double v, const TruncationConfig& cfg) {
  if (!(v >= 0.0)) throw std::domain_error("mu inverse: argument must be >= 0");
  return std::pow(v / cfg.c_bar, 1.0 / (1.0 + cfg.gamma));
}

double threshold(double delta, const TruncationConfig& cfg) {
  return mu_inverse(h_of_delta(delta, cfg), cfg);
}

double tem_h_bar(double delta, const TemConfig& tem) {
  if (!(delta > 0.0)) throw std::domain_error("step size must be > 0");
  return std::pow(delta, -0.5 * tem.epsilon2);
}

double tem_radius(double delta, const TemConfig& tem) {
  return std::pow(tem_h_bar(delta, tem) / tem.c_bar, 1.0 / (1.0 + tem.gamma));
}

double truncate_state(double x, double radius) {
  if (x == 0.0) return 0.0;
  const double clamped = std::min(std::abs(x), radius);
  return x > 0.0 ? clamped : -clamped;
}

AdmissibilityReport admissibility_check(const TruncationConfig& cfg,
                                        std::span<const double> delta_samples) {
  if (delta_samples.empty()) throw std::invalid_argument("admissibility: empty sample list");
  AdmissibilityReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const double delta : delta_samples) {
    const double margin = cfg.h_hat - std::pow(delta, 1.0 / 6.0) * h_of_delta(delta, cfg);
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_delta = delta;
    }
  }
  report.h_hat_bound_ok = cfg.h_hat >= std::max(1.0, mu_eval(1.0, cfg));
  report.passed = report.worst_margin >= 0.0 && report.h_hat_bound_ok;
  return report;
}

BoundedGrowthReport bounded_growth_check(const ScalarSdeModel& model,
                                         const TruncationConfig& cfg,
                                         std::size_t sample_count,
                                         std::uint64_t seed, double state_range) {
  if (sample_count == 0) throw std::invalid_argument("empty sample");

  auto rng = derive_stream(seed, 0x67726f77);  // "grow"
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> state(-state_range, state_range);
  const double log_lo = std::log(1e-12);

  BoundedGrowthReport report;
  report.samples = sample_count;
  for (std::size_t i = 0; i < sample_count; ++i) {
    // Alternate uniform and log-uniform step sizes so both ends of (0, 1] are hit.
    const double u = unit(rng);
    const double delta = (i % 2 == 0) ? std::max(1.0 - u, 1e-12) : std::exp(log_lo * u);
    const double x = state(rng);
    const double y = state(rng);

    const double frozen = truncate_state(x, threshold(delta, cfg));
    const auto coeff = model.freeze(0.0, frozen);
    const double lhs = std::max(std::abs(coeff.alpha * y), std::abs(coeff.beta * y));
    const double ratio = lhs / (h_of_delta(delta, cfg) * (1.0 + std::abs(y)));
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    if (ratio > 1.0 && report.passed) {
      report.passed = false;
      report.fail_delta = delta;
      report.fail_x = x;
      report.fail_y = y;
    }
  }
  return report;
}

std::vector<double> log_spaced_deltas(std::size_t count, double lo) {
  if (count < 2 || !(lo > 0.0 && lo < 1.0))
    throw std::invalid_argument("log_spaced_deltas: need count >= 2 and lo in (0, 1)");
  std::vector<double> out(count);
  const double step = -std::log(lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
  out.back() = 1.0;
  return out;
}

}  // namespace sdlab
