#include <algorithm>
#include <cmath>
#include <map>

#include "mcflab/analysis.hpp"
#include "mcflab/error.hpp"

namespace mcflab {

Immersion scale_immersion(const Immersion& imm, double factor) {
  const auto scaled = [factor](std::span<const Vec2> pts) {
    std::vector<Vec2> out(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) out[j] = factor * pts[j];
    return out;
  };
  switch (representation(imm)) {
    case Representation::PlaneCurve:
      return PlaneCurve(scaled(std::get<PlaneCurve>(imm).points()));
    case Representation::Revolution: {
      const auto& rev = std::get<Revolution>(imm);
      return Revolution(scaled(rev.profile()), rev.dimension());
    }
    case Representation::AnalyticSphere: {
      const auto& s = std::get<AnalyticSphere>(imm);
      return AnalyticSphere(factor * s.radius(), s.dimension());
    }
  }
  throw Error(Errc::UnsupportedRepresentation, "unknown immersion");
}

namespace {

bool in_window(const RescaleSpec& spec, double t) {
  return !spec.window || (t >= spec.window->first && t <= spec.window->second);
}

double relative_gap(std::span<const double> got, std::span<const double> want, double factor) {
  double scale = 0.0;
  for (double w : want) scale = std::max(scale, std::abs(factor * w));
  if (scale == 0.0) return 0.0;
  double gap = 0.0;
  for (std::size_t j = 0; j < got.size(); ++j) gap = std::max(gap, std::abs(got[j] - factor * want[j]));
  return gap / scale;
}

// Left rectangle rule over consecutive kept frames.
double frame_spacetime_integral(std::span<const FlowState> frames, NormKey key) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    sum += (frames[k + 1].frame.t - frames[k].frame.t) * spatial_integral(frames[k].frame, key);
  }
  return sum;
}

}  // namespace

FlowTrajectory parabolic_rescale(const FlowTrajectory& traj, const RescaleSpec& spec) {
  if (!(spec.Q > 0.0) || !std::isfinite(spec.Q)) throw Error(Errc::NonPositiveInputs, "rescale factor Q must be positive");
  if (traj.frames.empty() || traj.steps.empty()) throw Error(Errc::TrajectoryTooShort, "nothing to rescale");
  const double t_first = traj.steps.front().t;
  const double t_last = traj.steps.back().t;
  if (spec.t_center < t_first || spec.t_center > t_last) {
    throw Error(Errc::WindowOutOfRange, "t_center lies outside the trajectory");
  }
  const double Q = spec.Q;
  const auto map_time = [&](double t) { return Q * (t - spec.t_center); };
  if (spec.window) {
    const double lo = map_time(traj.frames.front().frame.t);
    const double hi = map_time(traj.frames.back().frame.t);
    const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (spec.window->first > spec.window->second || spec.window->first < lo - slack ||
        spec.window->second > hi + slack) {
      throw Error(Errc::WindowOutOfRange, "rescaled window does not map inside the trajectory");
    }
  }

  const double n = traj.n;
  const double root_Q = std::sqrt(Q);
  FlowTrajectory out;
  out.n = traj.n;
  out.kind = traj.kind;
  out.config = traj.config;
  out.config.t_cap = map_time(traj.config.t_cap);
  out.norms = traj.norms;
  out.stop_reason = traj.stop_reason;
  out.violations = traj.violations;
  if (traj.exact_T) out.exact_T = map_time(*traj.exact_T);

  for (const auto& state : traj.frames) {
    const double t = map_time(state.frame.t);
    if (!in_window(spec, t)) continue;
    Immersion imm = scale_immersion(state.immersion, root_Q);
    GeometryFrame frame = compute_geometry(imm, t);
    out.frames.push_back({state.step, std::move(imm), std::move(frame)});
  }
  if (out.frames.empty()) throw Error(Errc::WindowOutOfRange, "no kept frame inside the rescaled window");

  const auto c_bound = traj.report.c_bound();
  out.report = MonitorReport(c_bound ? std::optional<double>(*c_bound / root_Q) : std::nullopt);
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    StepRecord r = traj.steps[i];
    r.t = map_time(r.t);
    if (!in_window(spec, r.t)) continue;
    r.dt *= Q;
    r.max_A2 /= Q;
    r.max_H2 /= Q;
    r.min_kappa /= root_Q;
    r.min_H /= root_Q;
    r.area *= std::pow(Q, 0.5 * n);
    for (std::size_t a = 0; a < out.norms.size(); ++a) {
      const double alpha = out.norms[a].alpha;
      r.acc[a] *= std::pow(Q, 0.5 * (n + 2.0 - alpha));
      r.spatial[a] *= std::pow(Q, 0.5 * (n - alpha));
    }
    if (i < traj.report.rows().size()) {
      MonitorRow row = traj.report.rows()[i];
      row.t = r.t;
      row.min_kappa /= root_Q;
      row.min_H /= root_Q;
      out.report.add(row);
    }
    out.steps.push_back(std::move(r));
  }
  return out;
}

double transformation_law_deviation(const FlowTrajectory& source, const FlowTrajectory& rescaled, double Q) {
  std::map<std::size_t, const GeometryFrame*> by_step;
  for (const auto& s : source.frames) by_step[s.step] = &s.frame;
  const double n = source.n;
  double worst = 0.0;
  for (const auto& s : rescaled.frames) {
    const auto it = by_step.find(s.step);
    if (it == by_step.end()) continue;
    const GeometryFrame& src = *it->second;
    const GeometryFrame& dst = s.frame;
    worst = std::max(worst, relative_gap(dst.H, src.H, 1.0 / std::sqrt(Q)));
    worst = std::max(worst, relative_gap(dst.A2, src.A2, 1.0 / Q));
    worst = std::max(worst, relative_gap(dst.weight, src.weight, std::pow(Q, 0.5 * n)));
    worst = std::max(worst, relative_gap(dst.g_axial, src.g_axial, Q));
  }
  return worst;
}

InvarianceCheck spacetime_norm_invariance_check(const FlowTrajectory& traj, const RescaleSpec& spec,
                                                Quantity quantity, double alpha, NormScope scope) {
  const FlowTrajectory scaled = parabolic_rescale(traj, spec);
  const NormKey key{quantity, alpha};
  const double n = traj.n;
  InvarianceCheck check;
  if (scope == NormScope::SpaceTime) {
    std::vector<FlowState> window;
    for (const auto& s : traj.frames) {
      if (in_window(spec, spec.Q * (s.frame.t - spec.t_center))) window.push_back(s);
    }
    check.original = frame_spacetime_integral(window, key);
    check.rescaled = frame_spacetime_integral(scaled.frames, key);
    check.predicted_ratio = std::pow(spec.Q, 0.5 * (n + 2.0 - alpha));
  } else {
    check.original = spatial_integral(traj.frames[traj.nearest_frame(spec.t_center)].frame, key);
    check.rescaled = spatial_integral(scaled.frames[scaled.nearest_frame(0.0)].frame, key);
    check.predicted_ratio = std::pow(spec.Q, 0.5 * (n - alpha));
  }
  const double expected = check.predicted_ratio * check.original;
  check.deviation = std::abs(check.rescaled - expected) / std::abs(expected);
  return check;
}

}  // namespace mcflab
