#include "mcflab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcflab/error.hpp"
#include "mcflab/oracles.hpp"

namespace mcflab {

void FlowConfig::validate() const {
  if (!(t_cap > 0.0) || !std::isfinite(t_cap)) throw Error(Errc::InvalidConfig, "t_cap must be positive and finite");
  if (!(c_stab > 0.0 && c_stab <= 1.0)) throw Error(Errc::InvalidConfig, "c_stab must lie in (0, 1]");
  if (!(dt_floor > 0.0)) throw Error(Errc::InvalidConfig, "dt_floor must be positive");
  if (!(blowup_threshold > 1.0)) throw Error(Errc::InvalidConfig, "blowup_threshold must exceed 1");
  if (record_stride == 0) throw Error(Errc::InvalidConfig, "record_stride must be >= 1");
  if (max_frames == 1) throw Error(Errc::InvalidConfig, "max_frames must be 0 or >= 2");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ReachedTCap: return "ReachedTCap";
    case StopReason::CurvatureBlowup: return "CurvatureBlowup";
    case StopReason::StepUnderflow: return "StepUnderflow";
    case StopReason::GeometryDegenerate: return "GeometryDegenerate";
  }
  return "Unknown";
}

std::optional<std::size_t> FlowTrajectory::norm_index(NormKey key) const {
  const auto it = std::find(norms.begin(), norms.end(), key);
  if (it == norms.end()) return std::nullopt;
  return static_cast<std::size_t>(it - norms.begin());
}

std::size_t FlowTrajectory::nearest_frame(double t) const {
  if (frames.empty()) throw Error(Errc::TrajectoryTooShort, "trajectory has no kept frames");
  std::size_t best = 0;
  for (std::size_t k = 1; k < frames.size(); ++k) {
    if (std::abs(frames[k].frame.t - t) < std::abs(frames[best].frame.t - t)) best = k;
  }
  return best;
}

Immersion step(const Immersion& imm, const GeometryFrame& frame, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::NonPositiveInputs, "step needs dt > 0");
  const auto move = [&](std::span<const Vec2> pts) {
    std::vector<Vec2> out(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) out[j] = pts[j] - (dt * frame.H[j]) * frame.normal[j];
    return out;
  };
  switch (representation(imm)) {
    case Representation::PlaneCurve:
      return PlaneCurve(move(std::get<PlaneCurve>(imm).points()));
    case Representation::Revolution: {
      const auto& rev = std::get<Revolution>(imm);
      auto pts = move(rev.profile());
      // Pole normals are exactly axial; keep the poles on the axis bit-for-bit.
      pts.front().y = 0.0;
      pts.back().y = 0.0;
      for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
        if (!(pts[j].y > 0.0)) {
          throw Error(Errc::DegenerateGeometry, "profile crossed the axis at sample " + std::to_string(j));
        }
      }
      return Revolution(std::move(pts), rev.dimension());
    }
    case Representation::AnalyticSphere: {
      const auto& s = std::get<AnalyticSphere>(imm);
      const double r2 = s.radius() * s.radius() - 2.0 * s.dimension() * dt;
      if (!(r2 > 0.0)) throw Error(Errc::DegenerateGeometry, "sphere step passes the extinction time");
      return AnalyticSphere(std::sqrt(r2), s.dimension());
    }
  }
  throw Error(Errc::UnsupportedRepresentation, "unknown immersion");
}

PlaneCurve redistribute_arclength(const PlaneCurve& curve) {
  const auto pts = curve.points();
  const std::size_t m = pts.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) cum[j + 1] = cum[j] + norm(pts[(j + 1) % m] - pts[j]);
  const double total = cum[m];
  std::vector<Vec2> out(m);
  out[0] = pts[0];
  std::size_t seg = 0;
  for (std::size_t k = 1; k < m; ++k) {
    const double target = total * static_cast<double>(k) / m;
    while (cum[seg + 1] < target) ++seg;
    const double tau = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
    // Catmull-Rom through the neighbouring samples.
    const Vec2 p0 = pts[(seg + m - 1) % m];
    const Vec2 p1 = pts[seg];
    const Vec2 p2 = pts[(seg + 1) % m];
    const Vec2 p3 = pts[(seg + 2) % m];
    const double t2 = tau * tau;
    const double t3 = t2 * tau;
    out[k] = 0.5 * ((2.0 * p1) + tau * (p2 - p0) + t2 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) +
                    t3 * (3.0 * p1 - p0 - 3.0 * p2 + p3));
  }
  return PlaneCurve(std::move(out));
}

double stable_dt(double h_min, double max_A2, double c_stab) {
  const double inf = std::numeric_limits<double>::infinity();
  const double diffusive = std::isfinite(h_min) ? 0.5 * h_min * h_min : inf;
  const double reactive = max_A2 > 0.0 ? 0.5 / max_A2 : inf;
  return c_stab * std::min(diffusive, reactive);
}

TimeStep adaptive_dt(const GeometryFrame& frame, const FlowConfig& cfg) {
  TimeStep ts;
  ts.unclipped = stable_dt(frame.h_min(), frame.max_A2(), cfg.c_stab);
  ts.dt = ts.unclipped;
  ts.underflow = ts.unclipped < cfg.dt_floor;
  const double remaining = cfg.t_cap - frame.t;
  if (ts.dt >= remaining) {
    ts.dt = remaining;
    ts.clipped = true;
  }
  return ts;
}

namespace {

std::vector<NormKey> registered_norms(const MonitorSet& monitors, int n) {
  std::vector<NormKey> keys = monitors.norms;
  for (Quantity q : {Quantity::A, Quantity::H}) {
    const NormKey critical{q, static_cast<double>(n + 2)};
    if (std::find(keys.begin(), keys.end(), critical) == keys.end()) keys.push_back(critical);
  }
  for (const auto& k : keys) {
    if (!(k.alpha > 0.0)) throw Error(Errc::InvalidConfig, "norm exponents must be positive");
  }
  return keys;
}

StepRecord make_record(std::size_t index, const GeometryFrame& frame, const NormAccumulator& acc) {
  StepRecord r;
  r.step = index;
  r.t = frame.t;
  r.max_A2 = frame.max_A2();
  r.max_H2 = frame.max_H2();
  r.min_kappa = frame.min_kappa();
  r.min_H = frame.min_H();
  r.area = frame.total_area();
  r.acc.assign(acc.values().begin(), acc.values().end());
  r.spatial.assign(acc.spatial().begin(), acc.spatial().end());
  return r;
}

// The final state is always kept, whatever the stride.
void keep_state(FlowTrajectory& traj, std::size_t& stride, std::size_t step_index, const Immersion& imm,
                const GeometryFrame& frame, bool final) {
  traj.frames.push_back({step_index, imm, frame});
  const std::size_t cap = traj.config.max_frames;
  while (cap != 0 && traj.frames.size() > cap) {
    stride *= 2;
    std::erase_if(traj.frames, [&](const FlowState& s) {
      return s.step % stride != 0 && !(final && s.step == step_index);
    });
  }
}

}  // namespace

FlowTrajectory run_flow(const Immersion& initial, const FlowConfig& cfg, const MonitorSet& monitors) {
  cfg.validate();
  if (cfg.redistribute && representation(initial) != Representation::PlaneCurve) {
    throw Error(Errc::InvalidConfig, "arclength redistribution applies to plane curves only");
  }
  FlowTrajectory traj;
  traj.n = dimension(initial);
  traj.kind = representation(initial);
  traj.config = cfg;
  traj.norms = registered_norms(monitors, traj.n);
  traj.report = MonitorReport(monitors.c_bound);
  std::optional<double> sphere_r0;
  if (traj.kind == Representation::AnalyticSphere) {
    sphere_r0 = std::get<AnalyticSphere>(initial).radius();
    traj.exact_T = *sphere_r0 * *sphere_r0 / (2.0 * traj.n);
  }

  NormAccumulator acc(traj.norms);
  Immersion imm = initial;
  GeometryFrame frame = compute_geometry(imm, 0.0);
  std::size_t stride = cfg.record_stride;
  bool redistributed = false;

  for (std::size_t index = 0;; ++index) {
    acc.observe(frame);
    traj.report.add(hypothesis_monitor(frame, monitors.c_bound));
    for (const auto& obs : monitors.observers) obs(frame);

    StepRecord record = make_record(index, frame, acc);
    record.redistributed = redistributed;
    if (!traj.steps.empty()) {
      const double prev = traj.steps.back().area;
      if (record.area - prev > 1e-12 * std::max(1.0, prev)) {
        traj.violations.push_back("area increased at step " + std::to_string(index) + " (t = " +
                                  std::to_string(record.t) + ")");
      }
    }
    const TimeStep ts = adaptive_dt(frame, cfg);
    record.dt = ts.clipped ? ts.unclipped : ts.dt;

    std::optional<StopReason> stop;
    if (record.max_A2 > cfg.blowup_threshold) {
      stop = StopReason::CurvatureBlowup;
    } else if (frame.t >= cfg.t_cap) {
      stop = StopReason::ReachedTCap;
    } else if (ts.underflow) {
      stop = StopReason::StepUnderflow;
    }

    if (stop) {
      traj.steps.push_back(std::move(record));
      keep_state(traj, stride, index, imm, frame, true);
      traj.stop_reason = stop;
      break;
    }
    if (index % stride == 0) keep_state(traj, stride, index, imm, frame, false);
    traj.steps.push_back(std::move(record));

    acc.advance(ts.dt);
    const double t_next = ts.clipped ? cfg.t_cap : frame.t + ts.dt;
    try {
      // Spheres are evaluated from r0 at the accumulated time so rounding does not compound.
      Immersion next = sphere_r0 ? Immersion(AnalyticSphere(std::sqrt(*sphere_r0 * *sphere_r0 - 2.0 * traj.n * t_next), traj.n))
                                 : step(imm, frame, ts.dt);
      if (cfg.redistribute) next = redistribute_arclength(std::get<PlaneCurve>(next));
      GeometryFrame next_frame = compute_geometry(next, t_next);
      imm = std::move(next);
      frame = std::move(next_frame);
      redistributed = cfg.redistribute;
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateGeometry && e.code() != Errc::InvalidImmersion) throw;
      if (traj.frames.empty() || traj.frames.back().step != index) {
        keep_state(traj, stride, index, imm, frame, true);
      }
      traj.stop_reason = StopReason::GeometryDegenerate;
      break;
    }
  }
  return traj;
}

}  // namespace mcflab
