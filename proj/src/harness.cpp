#include "sdlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace sdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Paths per reduction chunk. Fixed so that results do not depend on the
// number of workers.
constexpr std::size_t kChunkPaths = 32;

std::size_t chunk_count(std::size_t paths) { return (paths + kChunkPaths - 1) / kChunkPaths; }

/// Runs fn(chunk) for every chunk in [0, chunks) on up to `workers` threads.
template <class Fn>
void for_each_chunk(std::size_t chunks, unsigned workers, Fn&& fn) {
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), chunks));
  if (n_threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned w = 0; w < n_threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          fn(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::size_t steps_over(double horizon, double delta, const char* field) {
  if (!(delta > 0.0)) throw ConfigError(field, "step must be > 0");
  const double ratio = horizon / delta;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded)
    throw ConfigError(field, "step must divide the horizon");
  return static_cast<std::size_t>(rounded);
}

bool all_positive(const Trajectory& traj) {
  return std::all_of(traj.values.begin(), traj.values.end(),
                     [](double v) { return std::isfinite(v) && v > 0.0; });
}

struct PairAccumulator {
  double sum_sup = 0.0;
  double sum_end = 0.0;
  double sum_selected_sq = 0.0;  // sum of squared per-path selected errors
  std::size_t finite = 0;
  std::size_t positive = 0;
  std::size_t diverged = 0;

  void add(const PairAccumulator& o) {
    sum_sup += o.sum_sup;
    sum_end += o.sum_end;
    sum_selected_sq += o.sum_selected_sq;
    finite += o.finite;
    positive += o.positive;
    diverged += o.diverged;
  }
};

}  // namespace

std::string_view error_mode_name(ErrorMode mode) {
  return mode == ErrorMode::Supremum ? "sup" : "end";
}

std::vector<std::string> ExperimentConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  std::vector<std::string> warnings;
  try {
    if (auto w = truncation.validate()) warnings.push_back(*w);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("truncation", e.what());
  }
  try {
    tem().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("tem", e.what());
  }

  if (!(horizon > 0.0)) throw ConfigError("experiment.horizon", "must be > 0");
  if (schemes.empty()) throw ConfigError("experiment.schemes", "at least one scheme required");
  if (step_sizes.empty()) throw ConfigError("experiment.step_sizes", "at least one step required");
  if (paths < 2) throw ConfigError("experiment.paths", "at least two paths required");
  if (workers < 1) throw ConfigError("experiment.workers", "must be >= 1");

  const std::size_t fine = n_fine();
  if (!is_power_of_two(fine))
    throw ConfigError("experiment.ref_step", "horizon / ref_step must be a power of two");
  for (const double delta : step_sizes) {
    const std::size_t n = steps_over(horizon, delta, "experiment.step_sizes");
    if (!is_power_of_two(n))
      throw ConfigError("experiment.step_sizes", "horizon / step must be a power of two");
    if (n > fine || fine % n != 0)
      throw ConfigError("experiment.step_sizes", "ref_step must divide every step size");
  }
  return warnings;
}

std::size_t ExperimentConfig::n_fine() const {
  return steps_over(horizon, ref_step, "experiment.ref_step");
}

std::size_t ExperimentConfig::steps_for(double delta) const {
  return steps_over(horizon, delta, "experiment.step_sizes");
}

double ErrorStats::rmse_sup() const { return std::sqrt(mse_sup); }
double ErrorStats::rmse_end() const { return std::sqrt(mse_end); }

Trajectory reference_solution(std::span<const double> increments, double horizon,
                              const GinzburgLandauParams& p) {
  const std::size_t n = increments.size();
  if (n == 0) throw std::invalid_argument("reference: empty path");
  const double dt = horizon / static_cast<double>(n);
  const double rate = p.a * p.b - 0.5 * p.c * p.c;
  const double scale = 2.0 * p.a * p.x0 * p.x0;

  Trajectory ref{std::nullopt, dt, std::vector<double>(n + 1), false};
  ref.values[0] = p.x0;
  double w = 0.0;
  double e_sq_prev = 1.0;
  double integral = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    w += increments[i - 1];
    const double t = static_cast<double>(i) * dt;
    const double e = std::exp(rate * t + p.c * w);
    const double e_sq = e * e;
    integral += 0.5 * (e_sq_prev + e_sq) * dt;
    e_sq_prev = e_sq;
    ref.values[i] = p.x0 * e / std::sqrt(1.0 + scale * integral);
    if (!std::isfinite(ref.values[i])) ref.diverged = true;
  }
  return ref;
}

Trajectory reference_solution(const BrownianPathGrid& path, const GinzburgLandauParams& params) {
  return reference_solution(path.increments, path.horizon, params);
}

StrongError strong_error(const Trajectory& traj, const Trajectory& ref) {
  const std::size_t n = traj.n_steps();
  const std::size_t n_ref = ref.n_steps();
  if (n == 0 || n_ref == 0) throw std::invalid_argument("strong_error: empty trajectory");
  const double t_traj = traj.step * static_cast<double>(n);
  const double t_ref = ref.step * static_cast<double>(n_ref);
  if (std::abs(t_traj - t_ref) > 1e-12 * std::max(t_traj, t_ref))
    throw std::invalid_argument("strong_error: mismatched horizons");
  if (n_ref % n != 0)
    throw std::invalid_argument("strong_error: reference grid does not refine the trajectory");
  if (traj.diverged) return {kInf, kInf};

  const std::size_t factor = n_ref / n;
  StrongError out;
  for (std::size_t k = 0; k <= n; ++k) {
    const double d = traj.values[k] - ref.values[k * factor];
    out.sup_sq = std::max(out.sup_sq, d * d);
  }
  const double d_end = traj.values[n] - ref.values[n_ref];
  out.end_sq = d_end * d_end;
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.warnings = cfg.validate();

  const auto model = make_ginzburg_landau(cfg.model);
  const SchemeContext ctx{&model, cfg.truncation, cfg.tem(), cfg.force_tem_step};
  const std::size_t n_fine = cfg.n_fine();

  struct Pair {
    SchemeKind scheme;
    double delta;
    std::size_t factor;
  };
  std::vector<Pair> pairs;
  for (const auto scheme : cfg.schemes) {
    for (const double requested : cfg.step_sizes) {
      const std::size_t n = cfg.steps_for(requested);
      const double delta = cfg.horizon / static_cast<double>(n);
      try {
        check_step_admissible(scheme, delta, ctx);
        pairs.push_back({scheme, delta, n_fine / n});
      } catch (const SchemeRejected& e) {
        result.skipped.push_back(std::string(scheme_name(scheme)) + " at delta " +
                                 std::to_string(delta) + " skipped: " + e.what());
      }
    }
  }
  if (pairs.empty()) return result;

  const std::size_t chunks = chunk_count(cfg.paths);
  std::vector<std::vector<PairAccumulator>> partial(chunks,
                                                    std::vector<PairAccumulator>(pairs.size()));
  const bool select_sup = cfg.error_mode == ErrorMode::Supremum;

  for_each_chunk(chunks, cfg.workers, [&](std::size_t chunk) {
    auto& acc = partial[chunk];
    const std::size_t begin = chunk * kChunkPaths;
    const std::size_t end = std::min(cfg.paths, begin + kChunkPaths);
    for (std::size_t path_index = begin; path_index < end; ++path_index) {
      const auto path = generate_fine_path(cfg.seed, path_index, n_fine, cfg.horizon);
      const auto ref = reference_solution(path, cfg.model);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto coarse = coarsen(path, pairs[k].factor);
        const auto traj =
            simulate(pairs[k].scheme, ctx, coarse.increments, cfg.horizon, cfg.model.x0);
        auto& a = acc[k];
        if (all_positive(traj)) ++a.positive;
        if (traj.diverged) {
          ++a.diverged;
          continue;
        }
        const auto err = strong_error(traj, ref);
        a.sum_sup += err.sup_sq;
        a.sum_end += err.end_sq;
        const double selected = select_sup ? err.sup_sq : err.end_sq;
        a.sum_selected_sq += selected * selected;
        ++a.finite;
      }
    }
  });

  std::vector<PairAccumulator> total(pairs.size());
  for (const auto& chunk : partial)
    for (std::size_t k = 0; k < pairs.size(); ++k) total[k].add(chunk[k]);

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& a = total[k];
    ErrorStats s;
    s.scheme = pairs[k].scheme;
    s.delta = pairs[k].delta;
    s.m_paths = cfg.paths;
    s.diverged_count = a.diverged;
    s.positivity_fraction = static_cast<double>(a.positive) / static_cast<double>(cfg.paths);
    if (a.finite == 0) {
      s.mse_sup = s.mse_end = s.rmse = s.ci_half_width = kInf;
    } else {
      const double n = static_cast<double>(a.finite);
      s.mse_sup = a.sum_sup / n;
      s.mse_end = a.sum_end / n;
      const double mean = select_sup ? s.mse_sup : s.mse_end;
      s.rmse = std::sqrt(mean);
      if (a.finite >= 2) {
        const double var = std::max(0.0, (a.sum_selected_sq - n * mean * mean) / (n - 1.0));
        s.ci_half_width = 1.96 * std::sqrt(var / n);
      } else {
        s.ci_half_width = kInf;
      }
    }
    result.stats.push_back(s);
  }
  return result;
}

OrderFit fit_order(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("fit_order: need at least two points");
  OrderFit fit;
  fit.points.reserve(points.size());
  for (const auto& [delta, error] : points) {
    if (!(delta > 0.0) || !(error > 0.0) || !std::isfinite(delta) || !std::isfinite(error))
      throw std::invalid_argument("fit_order: step sizes and errors must be positive");
    fit.points.emplace_back(std::log(delta), std::log(error));
  }
  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_order: step sizes must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::vector<MomentRow> moment_diagnostic(const ExperimentConfig& cfg, double p,
                                         std::span<const double> deltas) {
  if (!(p >= 2.0)) throw std::invalid_argument("moment_diagnostic: p must be >= 2");
  if (cfg.paths < 1) throw std::invalid_argument("moment_diagnostic: need at least one path");
  const auto model = make_ginzburg_landau(cfg.model);

  std::vector<MomentRow> rows;
  for (const double requested : deltas) {
    const std::size_t n = steps_over(cfg.horizon, requested, "delta");
    const double delta = cfg.horizon / static_cast<double>(n);
    if (delta > 1.0) throw std::invalid_argument("moment_diagnostic: delta must be <= 1");
    const double radius = threshold(delta, cfg.truncation);

    const std::size_t chunks = chunk_count(cfg.paths);
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(n + 1, 0.0));
    for_each_chunk(chunks, cfg.workers, [&](std::size_t chunk) {
      auto& sums = partial[chunk];
      const std::size_t begin = chunk * kChunkPaths;
      const std::size_t end = std::min(cfg.paths, begin + kChunkPaths);
      for (std::size_t path_index = begin; path_index < end; ++path_index) {
        const auto dw = generate_increments(cfg.seed, path_index, n, cfg.horizon);
        double y = cfg.model.x0;
        sums[0] += std::pow(std::abs(y), p);
        for (std::size_t i = 0; i < n; ++i) {
          const auto coeff = model.freeze(0.0, truncate_state(y, radius));
          y = sd_step(y, coeff.alpha, coeff.beta, delta, dw[i]);
          sums[i + 1] += std::pow(std::abs(y), p);
        }
      }
    });
    std::vector<double> total(n + 1, 0.0);
    for (const auto& sums : partial)
      for (std::size_t i = 0; i <= n; ++i) total[i] += sums[i];
    const double m = static_cast<double>(cfg.paths);
    double worst = 0.0;
    for (const double s : total) worst = std::max(worst, s / m);
    rows.push_back({delta, worst});
  }
  return rows;
}

std::vector<IncrementRow> increment_scaling_diagnostic(const ExperimentConfig& cfg) {
  const std::size_t n_fine = cfg.n_fine();
  if (!is_power_of_two(n_fine))
    throw ConfigError("experiment.ref_step", "horizon / ref_step must be a power of two");
  const auto model = make_ginzburg_landau(cfg.model);

  std::vector<IncrementRow> rows;
  for (const double requested : cfg.step_sizes) {
    const std::size_t n = cfg.steps_for(requested);
    if (n_fine % n != 0 || n_fine / n < 2)
      throw std::invalid_argument(
          "increment_scaling_diagnostic: each step must span at least two reference steps");
    const std::size_t factor = n_fine / n;
    const double delta = cfg.horizon / static_cast<double>(n);
    const double radius = threshold(delta, cfg.truncation);

    const std::size_t chunks = chunk_count(cfg.paths);
    std::vector<double> partial(chunks, 0.0);
    for_each_chunk(chunks, cfg.workers, [&](std::size_t chunk) {
      const std::size_t begin = chunk * kChunkPaths;
      const std::size_t end = std::min(cfg.paths, begin + kChunkPaths);
      double sum = 0.0;
      for (std::size_t path_index = begin; path_index < end; ++path_index) {
        const auto path = generate_fine_path(cfg.seed, path_index, n_fine, cfg.horizon);
        const auto halves = coarsen(path, factor / 2);
        const auto steps = coarsen(halves, 2);
        double y = cfg.model.x0;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const auto coeff = model.freeze(0.0, truncate_state(y, radius));
          const double mid = sd_step(y, coeff.alpha, coeff.beta, 0.5 * delta, halves.increments[2 * i]);
          worst = std::max(worst, (mid - y) * (mid - y));
          y = sd_step(y, coeff.alpha, coeff.beta, delta, steps.increments[i]);
        }
        sum += worst;
      }
      partial[chunk] = sum;
    });
    double total = 0.0;
    for (const double s : partial) total += s;
    rows.push_back({delta, total / static_cast<double>(cfg.paths)});
  }
  return rows;
}

}  // namespace sdlab
