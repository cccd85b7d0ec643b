#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcflab/geometry.hpp"
#include "mcflab/monitors.hpp"

namespace mcflab {

struct FlowConfig {
  double t_cap = 1.0;
  double c_stab = 0.2;
  double dt_floor = 1e-12;
  /// Stop once max |A|^2 exceeds this.
  double blowup_threshold = 1e8;
  /// Keep the full geometric state every `record_stride` steps.
  std::size_t record_stride = 1;
  /// Cap on kept states; beyond it the kept set is thinned and the stride
  /// doubled. 0 disables the cap.
  std::size_t max_frames = 4096;
  /// Arclength re-equidistribution after each step (plane curves only).
  bool redistribute = false;

  /// Throws InvalidConfig.
  void validate() const;
};

enum class StopReason { ReachedTCap, CurvatureBlowup, StepUnderflow, GeometryDegenerate };

std::string_view to_string(StopReason reason);

struct StepRecord {
  std::size_t step = 0;
  double t = 0.0;
  /// Step taken from this state; on the final record, the unclipped
  /// step the stability bound would have allowed.
  double dt = 0.0;
  double max_A2 = 0.0;
  double max_H2 = 0.0;
  double min_kappa = 0.0;
  double min_H = 0.0;
  double area = 0.0;
  bool redistributed = false;
  /// Space-time integrals over [0, t], aligned with FlowTrajectory::norms.
  std::vector<double> acc;
  /// Spatial integrals at t, aligned with FlowTrajectory::norms.
  std::vector<double> spatial;
};

struct FlowState {
  std::size_t step = 0;
  Immersion immersion;
  GeometryFrame frame;
};

struct FlowTrajectory {
  int n = 1;
  Representation kind = Representation::PlaneCurve;
  FlowConfig config;
  std::vector<NormKey> norms;
  std::vector<StepRecord> steps;
  std::vector<FlowState> frames;
  std::optional<StopReason> stop_reason;
  MonitorReport report;
  /// Closed-form maximal time when the initial data is an analytic sphere.
  std::optional<double> exact_T;
  std::vector<std::string> violations;

  std::optional<std::size_t> norm_index(NormKey key) const;
  /// Kept state whose time is nearest to t.
  std::size_t nearest_frame(double t) const;
};

struct MonitorSet {
  std::vector<NormKey> norms;
  std::optional<double> c_bound;
  /// Read-only observers called once per step with the fresh frame.
  std::vector<std::function<void(const GeometryFrame&)>> observers;
};

/// Explicit Euler step of dF/dt = -H nu (closed form for the analytic sphere).
Immersion step(const Immersion& imm, const GeometryFrame& frame, double dt);

/// Moves plane-curve points along the curve to equal arclength spacing,
/// keeping the first point fixed.
PlaneCurve redistribute_arclength(const PlaneCurve& curve);

struct TimeStep {
  double dt = 0.0;
  /// Stability bound before clipping to t_cap.
  double unclipped = 0.0;
  bool clipped = false;
  bool underflow = false;
};

/// c_stab * min(h_min^2 / 2, 1 / (2 max|A|^2)).
double stable_dt(double h_min, double max_A2, double c_stab);

TimeStep adaptive_dt(const GeometryFrame& frame, const FlowConfig& cfg);

FlowTrajectory run_flow(const Immersion& initial, const FlowConfig& cfg, const MonitorSet& monitors = {});

}  // namespace mcflab
