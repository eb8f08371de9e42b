#include "sdlab/schemes.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace sdlab {

std::string_view scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::SD: return "sd";
    case SchemeKind::TSD: return "tsd";
    case SchemeKind::TEM: return "tem";
    case SchemeKind::EM: return "em";
  }
  return "?";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
  if (name == "sd") return SchemeKind::SD;
  if (name == "tsd") return SchemeKind::TSD;
  if (name == "tem") return SchemeKind::TEM;
  if (name == "em") return SchemeKind::EM;
  return std::nullopt;
}

namespace {

double tsd_step_with_radius(double y, double t_n, double delta, double dw, double radius,
                            const ScalarSdeModel& model) {
  const auto coeff = model.freeze(t_n, truncate_state(y, radius));
  return sd_step(y, coeff.alpha, coeff.beta, delta, dw);
}

double tem_step_with_radius(double y, double t_n, double delta, double dw, double radius,
                            const ScalarSdeModel& model) {
  const double z = truncate_state(y, radius);
  return y + model.drift(t_n, z) * delta + model.diffusion(t_n, z) * dw;
}

std::string format_tem_rejection(double delta, double bound) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "tem: step %.10g exceeds the bound (8*c_bar)^(-2/epsilon2) = %.12g; "
                "use --force-tem-step to override",
                delta, bound);
  return buf;
}

}  // namespace

double sd_model_step(double y, double t_n, double delta, double dw,
                     const ScalarSdeModel& model) {
  const auto coeff = model.freeze(t_n, y);
  return sd_step(y, coeff.alpha, coeff.beta, delta, dw);
}

double tsd_step(double y, double delta, double dw, const ScalarSdeModel& model,
                const TruncationConfig& cfg, double t_n) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw SchemeRejected("tsd: step size must lie in (0, 1]");
  return tsd_step_with_radius(y, t_n, delta, dw, threshold(delta, cfg), model);
}

double tem_step(double y, double delta, double dw, const ScalarSdeModel& model,
                const TemConfig& tem, bool force, double t_n) {
  if (!force && delta > tem.max_delta())
    throw SchemeRejected(format_tem_rejection(delta, tem.max_delta()));
  return tem_step_with_radius(y, t_n, delta, dw, tem_radius(delta, tem), model);
}

double em_step(double y, double t_n, double delta, double dw, const ScalarSdeModel& model) {
  return y + model.drift(t_n, y) * delta + model.diffusion(t_n, y) * dw;
}

void check_step_admissible(SchemeKind kind, double delta, const SchemeContext& ctx) {
  if (!(delta > 0.0)) throw SchemeRejected("step size must be > 0");
  switch (kind) {
    case SchemeKind::TSD:
      if (delta > 1.0) throw SchemeRejected("tsd: step size must lie in (0, 1]");
      break;
    case SchemeKind::TEM:
      if (!ctx.force_tem_step && delta > ctx.tem.max_delta())
        throw SchemeRejected(format_tem_rejection(delta, ctx.tem.max_delta()));
      break;
    case SchemeKind::SD:
    case SchemeKind::EM:
      break;
  }
}

Trajectory simulate(SchemeKind kind, const SchemeContext& ctx,
                    std::span<const double> increments, double horizon, double x0) {
  if (ctx.model == nullptr) throw std::invalid_argument("simulate: no model");
  if (increments.empty()) throw std::invalid_argument("simulate: no increments");
  const auto& model = *ctx.model;
  const std::size_t n = increments.size();
  const double delta = horizon / static_cast<double>(n);
  check_step_admissible(kind, delta, ctx);

  double radius = 0.0;
  if (kind == SchemeKind::TSD) radius = threshold(delta, ctx.truncation);
  if (kind == SchemeKind::TEM) radius = tem_radius(delta, ctx.tem);

  Trajectory traj{kind, delta, std::vector<double>(n + 1), false};
  double y = x0;
  traj.values[0] = y;
  for (std::size_t i = 0; i < n; ++i) {
    const double t_n = static_cast<double>(i) * delta;
    const double dw = increments[i];
    switch (kind) {
      case SchemeKind::SD: y = sd_model_step(y, t_n, delta, dw, model); break;
      case SchemeKind::TSD: y = tsd_step_with_radius(y, t_n, delta, dw, radius, model); break;
      case SchemeKind::TEM: y = tem_step_with_radius(y, t_n, delta, dw, radius, model); break;
      case SchemeKind::EM: y = em_step(y, t_n, delta, dw, model); break;
    }
    traj.values[i + 1] = y;
    if (!std::isfinite(y)) traj.diverged = true;
  }
  if (!std::isfinite(x0)) traj.diverged = true;
  return traj;
}

}  // namespace sdlab
