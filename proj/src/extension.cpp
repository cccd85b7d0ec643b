#include <algorithm>
#include <cmath>
#include <vector>

#include "mcflab/analysis.hpp"
#include "mcflab/error.hpp"

namespace mcflab {

std::string_view to_string(NormStatus s) {
  switch (s) {
    case NormStatus::Finite: return "finite";
    case NormStatus::Diverging: return "diverging";
    case NormStatus::Undetermined: return "undetermined";
  }
  return "unknown";
}

namespace {

NormVerdict judge(const FlowTrajectory& traj, NormKey key, bool blew_up, const DichotomyOptions& opts) {
  NormVerdict v;
  v.key = key;
  const auto idx = traj.norm_index(key);
  if (!idx) {
    v.note = "not accumulated";
    return v;
  }
  v.accumulated = traj.steps.empty() ? 0.0 : traj.steps.back().acc[*idx];
  if (!blew_up) {
    v.status = NormStatus::Finite;
    v.note = "no blow-up on the computed interval";
    return v;
  }
  try {
    v.fit = dichotomy_fit(traj, key, opts);
    v.status = v.fit->growth == Growth::Finite ? NormStatus::Finite : NormStatus::Diverging;
    v.note = std::string(to_string(v.fit->growth)) + " growth, rate exponent " + std::to_string(v.fit->rate_exponent);
  } catch (const Error& e) {
    v.note = e.what();
  }
  return v;
}

NormStatus status_of(const std::vector<NormVerdict>& verdicts, NormKey key) {
  for (const auto& v : verdicts) {
    if (v.key == key) return v.status;
  }
  return NormStatus::Undetermined;
}

TheoremVerdict theorem(std::string name, bool hypothesis, NormStatus status, bool blew_up) {
  TheoremVerdict t;
  t.name = std::move(name);
  t.pointwise_hypothesis = hypothesis;
  t.norm_status = status;
  t.contradiction = blew_up && hypothesis && status == NormStatus::Finite;
  if (!blew_up) {
    t.diagnosis = "flow did not blow up; nothing to test";
  } else if (!hypothesis) {
    t.diagnosis = "pointwise hypothesis failed; criterion does not apply";
  } else if (t.contradiction) {
    t.diagnosis = "critical norm stayed finite through blow-up";
  } else if (status == NormStatus::Diverging) {
    t.diagnosis = "critical norm diverges at blow-up";
  } else {
    t.diagnosis = "critical norm growth could not be classified";
  }
  return t;
}

}  // namespace

ExtensionReport extension_report(const FlowTrajectory& traj, std::span<const double> alphas,
                                 const DichotomyOptions& opts) {
  ExtensionReport r;
  r.stop_reason = traj.stop_reason;
  r.blew_up = traj.stop_reason == StopReason::CurvatureBlowup || traj.stop_reason == StopReason::StepUnderflow;
  r.tightest_C = traj.report.tightest_C();
  r.initial_mean_convex = traj.report.mean_convex_initially();

  const double critical = traj.n + 2.0;
  std::vector<double> all(alphas.begin(), alphas.end());
  if (std::find(all.begin(), all.end(), critical) == all.end()) all.push_back(critical);
  for (double alpha : all) {
    for (Quantity q : {Quantity::A, Quantity::H}) {
      const NormKey key{q, alpha};
      if (traj.norm_index(key)) r.norms.push_back(judge(traj, key, r.blew_up, opts));
    }
  }

  const NormStatus a_status = status_of(r.norms, {Quantity::A, critical});
  const NormStatus h_status = status_of(r.norms, {Quantity::H, critical});
  const auto c_bound = traj.report.c_bound();
  const bool lower_bound_held = !c_bound || r.tightest_C <= *c_bound;
  r.theorems.push_back(theorem("second fundamental form criterion", true, a_status, r.blew_up));
  r.theorems.push_back(theorem("mean curvature criterion, h >= -C", lower_bound_held, h_status, r.blew_up));
  r.theorems.push_back(theorem("mean curvature criterion, H > 0 initially", r.initial_mean_convex, h_status, r.blew_up));

  r.consistent = std::none_of(r.theorems.begin(), r.theorems.end(), [](const auto& t) { return t.contradiction; });
  if (!r.blew_up) {
    r.summary = "no singularity reached; all accumulators finite on the computed interval";
  } else if (!r.consistent) {
    r.summary = "blow-up with a finite critical accumulator under the criterion's hypotheses";
  } else if (a_status == NormStatus::Diverging) {
    r.summary = "blow-up with diverging critical accumulators";
  } else {
    r.summary = "blow-up; critical accumulator growth undetermined";
  }
  return r;
}

}  // namespace mcflab
