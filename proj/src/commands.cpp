#include "sdlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "sdlab/config_file.hpp"

namespace sdlab {

namespace {

struct Loaded {
  ExperimentConfig cfg;
  std::vector<std::string> warnings;
};

// Loads, applies overrides and validates. Returns nullopt after reporting.
std::optional<Loaded> load_validated(const std::string& path, const Overrides& overrides,
                                     std::ostream& err) {
  try {
    Loaded loaded{load_config(path), {}};
    auto& cfg = loaded.cfg;
    if (overrides.workers) cfg.workers = *overrides.workers;
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.error_mode) cfg.error_mode = *overrides.error_mode;
    cfg.force_tem_step = overrides.force_tem_step;
    loaded.warnings = cfg.validate();
    for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
    return loaded;
  } catch (const ConfigParseError& e) {
    err << "config error: " << path << ": " << e.what() << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << path << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

// Writes through `write` to a file, or to stdout for "-".
bool write_output(const std::string& out_path, const std::function<void(std::ostream&)>& write,
                  std::ostream& err) {
  if (out_path == "-") {
    write(std::cout);
    return true;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    err << "error: cannot open " << out_path << " for writing\n";
    return false;
  }
  write(out);
  return static_cast<bool>(out);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_summary(std::ostream& log, const ExperimentConfig& cfg, const ExperimentResult& res) {
  log << pad("scheme", 8) << pad("delta", 14) << pad("rmse_sup", 14) << pad("rmse_end", 14)
      << pad("positive", 10) << "diverged\n";
  for (const auto& s : res.stats) {
    log << pad(std::string(scheme_name(s.scheme)), 8) << pad(short_real(s.delta), 14)
        << pad(short_real(s.rmse_sup()), 14) << pad(short_real(s.rmse_end()), 14)
        << pad(short_real(s.positivity_fraction), 10) << s.diverged_count << '\n';
  }
  for (const auto scheme : cfg.schemes) {
    std::vector<std::pair<double, double>> sup, end;
    for (const auto& s : res.stats) {
      if (s.scheme != scheme) continue;
      if (std::isfinite(s.rmse_sup()) && s.rmse_sup() > 0) sup.emplace_back(s.delta, s.rmse_sup());
      if (std::isfinite(s.rmse_end()) && s.rmse_end() > 0) end.emplace_back(s.delta, s.rmse_end());
    }
    log << "fitted order " << scheme_name(scheme) << ": ";
    if (end.size() >= 2 && sup.size() >= 2) {
      const auto fit_end = fit_order(end);
      const auto fit_sup = fit_order(sup);
      log << "rmse_end slope " << short_real(fit_end.slope) << " (r^2 "
          << short_real(fit_end.r_squared) << "), rmse_sup slope " << short_real(fit_sup.slope)
          << " (r^2 " << short_real(fit_sup.r_squared) << ")\n";
    } else {
      log << "not enough step sizes\n";
    }
  }
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ErrorStats>& stats) {
  out << kResultsCsvHeader << '\n';
  for (const auto& s : stats) {
    out << scheme_name(s.scheme) << ',' << format_real(s.delta) << ',' << s.m_paths << ','
        << format_real(s.mse_sup) << ',' << format_real(s.mse_end) << ','
        << format_real(s.rmse_sup()) << ',' << format_real(s.rmse_end()) << ','
        << format_real(s.ci_half_width) << ',' << format_real(s.positivity_fraction) << ','
        << s.diverged_count << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Trajectory& ref) {
  const std::size_t n = traj.n_steps();
  const std::size_t factor = ref.n_steps() / n;
  out << "t,y,x\n";
  for (std::size_t k = 0; k <= n; ++k) {
    out << format_real(static_cast<double>(k) * traj.step) << ',' << format_real(traj.values[k])
        << ',' << format_real(ref.values[k * factor]) << '\n';
  }
}

int cmd_run(const std::string& config_path, const std::string& out_path,
            const Overrides& overrides, std::ostream& log, std::ostream& err) {
  const auto loaded = load_validated(config_path, overrides, err);
  if (!loaded) return kExitConfigError;
  const auto& cfg = loaded->cfg;

  const auto result = run_experiment(cfg);
  for (const auto& s : result.skipped) err << "skipped: " << s << '\n';
  if (result.stats.empty()) {
    err << "error: every requested (scheme, step) pair was rejected\n";
    return kExitNothingToRun;
  }
  for (const auto& s : result.stats) {
    if (s.diverged_count > 0)
      err << "warning: " << scheme_name(s.scheme) << " at delta " << format_real(s.delta) << ": "
          << s.diverged_count << " diverged paths excluded from the error estimate\n";
  }

  if (!write_output(out_path, [&](std::ostream& o) { write_results_csv(o, result.stats); }, err))
    return kExitConfigError;
  print_summary(out_path == "-" ? err : log, cfg, result);
  return kExitOk;
}

int cmd_path(const std::string& config_path, const std::string& scheme_text, double delta,
             std::uint64_t path_index, const std::string& out_path, const Overrides& overrides,
             std::ostream& log, std::ostream& err) {
  const auto loaded = load_validated(config_path, overrides, err);
  if (!loaded) return kExitConfigError;
  const auto& cfg = loaded->cfg;

  const auto scheme = parse_scheme(scheme_text);
  if (!scheme) {
    err << "error: unknown scheme '" << scheme_text << "'\n";
    return kExitConfigError;
  }
  const auto listed = std::find_if(cfg.step_sizes.begin(), cfg.step_sizes.end(), [&](double d) {
    return std::abs(d - delta) <= 1e-12 * std::max(std::abs(d), std::abs(delta));
  });
  if (listed == cfg.step_sizes.end()) {
    err << "error: delta " << format_real(delta) << " is not in experiment.step_sizes\n";
    return kExitConfigError;
  }

  const auto model = make_ginzburg_landau(cfg.model);
  const SchemeContext ctx{&model, cfg.truncation, cfg.tem(), cfg.force_tem_step};
  const std::size_t n_fine = cfg.n_fine();
  const std::size_t n = cfg.steps_for(*listed);

  const auto path = generate_fine_path(cfg.seed, path_index, n_fine, cfg.horizon);
  const auto ref = reference_solution(path, cfg.model);
  const auto coarse = coarsen(path, n_fine / n);
  Trajectory traj;
  try {
    traj = simulate(*scheme, ctx, coarse.increments, cfg.horizon, cfg.model.x0);
  } catch (const SchemeRejected& e) {
    err << "error: " << e.what() << '\n';
    return kExitNothingToRun;
  }
  if (traj.diverged) err << "warning: trajectory diverged\n";

  if (!write_output(out_path, [&](std::ostream& o) { write_trajectory_csv(o, traj, ref); }, err))
    return kExitConfigError;
  (out_path == "-" ? err : log) << scheme_name(*scheme) << " path " << path_index << " delta " << format_real(traj.step)
      << ": y(T) = " << format_real(traj.values.back())
      << ", x(T) = " << format_real(ref.values.back()) << '\n';
  return kExitOk;
}

int cmd_check(const std::string& config_path, std::ostream& log, std::ostream& err) {
  const auto loaded = load_validated(config_path, Overrides{}, err);
  if (!loaded) return kExitConfigError;
  const auto& cfg = loaded->cfg;
  const auto model = make_ginzburg_landau(cfg.model);

  bool all_passed = true;
  auto report = [&](bool passed, const std::string& name, const std::string& detail) {
    log << (passed ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
    if (!passed) {
      err << "check failed: " << name << ": " << detail << '\n';
      all_passed = false;
    }
  };

  {
    const auto r = consistency_check(model, 1000, cfg.seed);
    std::ostringstream d;
    d << "worst relative error " << short_real(r.worst_relative_error) << " over " << r.samples
      << " samples";
    if (!r.passed) d << "; first violation at t=" << format_real(*r.fail_t) << " x=" << format_real(*r.fail_x);
    report(r.passed, "freeze consistency", d.str());
  }
  {
    const double p = 2.0;
    const double c_k = cfg.model.a * cfg.model.b + 0.5 * (p - 1.0) * cfg.model.c * cfg.model.c;
    const auto r = khasminskii_check(model, p, c_k, -100.0, 100.0, 0.01);
    std::ostringstream d;
    d << "p=" << short_real(p) << " C_K=" << short_real(c_k) << " worst ratio "
      << short_real(r.worst_ratio) << " at x=" << short_real(r.worst_x);
    report(r.passed, "khasminskii", d.str());
  }
  {
    const auto r = bounded_growth_check(model, cfg.truncation, 100000, cfg.seed);
    std::ostringstream d;
    d << "worst ratio " << short_real(r.worst_ratio) << " over " << r.samples << " samples";
    if (!r.passed)
      d << "; first violation at delta=" << format_real(*r.fail_delta)
        << " x=" << format_real(*r.fail_x) << " y=" << format_real(*r.fail_y);
    report(r.passed, "bounded growth", d.str());
  }
  {
    const auto deltas = log_spaced_deltas(50, 1e-6);
    const auto r = admissibility_check(cfg.truncation, deltas);
    std::ostringstream d;
    d << "worst margin " << short_real(r.worst_margin) << " at delta=" << short_real(r.worst_delta)
      << " (h_hat=" << short_real(cfg.truncation.h_hat) << ")";
    if (!r.h_hat_bound_ok) d << "; h_hat below max(1, mu(1))";
    report(r.passed, "admissibility", d.str());
  }
  return all_passed ? kExitOk : kExitCheckFailed;
}

}  // namespace sdlab
