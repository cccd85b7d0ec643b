#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcflab/dichotomy.hpp"
#include "mcflab/flow.hpp"

namespace mcflab {

// ---------------------------------------------------------------------------
// Parabolic rescaling F -> Q^{1/2} F(t / Q + t_center)
// ---------------------------------------------------------------------------

struct RescaleSpec {
  double Q = 1.0;
  double t_center = 0.0;
  /// Optional window in rescaled time; kept frames outside it are dropped.
  std::optional<std::pair<double, double>> window;
};

Immersion scale_immersion(const Immersion& imm, double factor);

/// Positions scaled by Q^{1/2}, times mapped t -> Q (t - t_center), frames
/// recomputed from the scaled positions, step records and accumulators
/// transformed by their scaling laws.
FlowTrajectory parabolic_rescale(const FlowTrajectory& traj, const RescaleSpec& spec);

/// Largest relative deviation of the recomputed rescaled frames from the
/// transformation laws H -> Q^{-1/2} H, |A|^2 -> Q^{-1}|A|^2, dmu -> Q^{n/2} dmu,
/// g -> Q g, matched frame by frame.
double transformation_law_deviation(const FlowTrajectory& source, const FlowTrajectory& rescaled, double Q);

enum class NormScope { SpaceTime, Spatial };

struct InvarianceCheck {
  double original = 0.0;
  double rescaled = 0.0;
  /// Q^{(n+2-alpha)/2} for space-time integrals, Q^{(n-alpha)/2} for spatial ones.
  double predicted_ratio = 1.0;
  /// |rescaled - predicted_ratio * original| / (predicted_ratio * original).
  double deviation = 0.0;
};

/// Space-time integrals use the kept frames with the left rectangle rule
/// over the window; spatial integrals use the frame nearest t_center.
InvarianceCheck spacetime_norm_invariance_check(const FlowTrajectory& traj, const RescaleSpec& spec,
                                                Quantity quantity, double alpha,
                                                NormScope scope = NormScope::SpaceTime);

// ---------------------------------------------------------------------------
// Evolution-equation residuals
// ---------------------------------------------------------------------------

enum class Equation { Metric, Normal, SecondFundamentalForm, MeanCurvature, NormSquared };

std::string_view to_string(Equation eq);

/// Residual samples (poles of revolution profiles are excluded). Tensor and
/// vector equations report the frame-independent norm of the residual in an
/// orthonormal principal frame.
struct ResidualField {
  std::vector<std::size_t> samples;
  std::vector<double> values;

  double max_abs() const;
};

/// Centred (non-uniform) time difference at kept frame k minus the right-hand
/// side evaluated on frame k. Needs kept frames k-1, k, k+1 from consecutive steps.
ResidualField evolution_residual(const FlowTrajectory& traj, std::size_t k, Equation eq);

struct PinchingResidual {
  ResidualField residual;
  /// -(2/H^4) |H grad h - grad H (x) h|^2 per residual sample.
  std::vector<double> gradient_term;
  double max_gradient_term() const;
};

PinchingResidual pinching_evolution_residual(const FlowTrajectory& traj, std::size_t k);

// ---------------------------------------------------------------------------
// Sobolev constant and the sup-bound constant chain
// ---------------------------------------------------------------------------

/// 2^n (1+n)^{1+1/n} / ((n-1) sigma_n), sigma_n the unit-ball volume in R^{n+1}.
double sobolev_constant(int n);

struct MoserConstants {
  int n = 3;
  double T0 = 0.0;
  double sup_A = 0.0;
  double t = 0.0;
  double beta = 0.0;
  double sobolev = 0.0;
  /// p at which s and D are evaluated: p_0 = (n+2)/2.
  double p = 0.0;
  double s = 0.0;
  double D = 0.0;
  double mu = 0.0;
  double C2 = 0.0;

  /// p_k = (n+2)/2 mu^k.
  double p_k(int k) const;
};

MoserConstants moser_constants(int n, double T0, double sup_A, double t);

struct MoserReport {
  double T0 = 0.0;
  double sup_A = 0.0;
  double spacetime_integral = 0.0;
  MoserConstants constants;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool falsified = false;
};

/// Checks max_{[T0/2, T0]} H^2 <= C2(T0/2) (int_0^T0 int |H|^{n+2})^{2/(n+2)}
/// with T0 the final time of a trajectory that reached its t_cap.
MoserReport verify_moser_bound(const FlowTrajectory& traj);

// ---------------------------------------------------------------------------
// Extension criteria verdicts
// ---------------------------------------------------------------------------

enum class NormStatus { Finite, Diverging, Undetermined };

std::string_view to_string(NormStatus s);

struct NormVerdict {
  NormKey key;
  NormStatus status = NormStatus::Undetermined;
  double accumulated = 0.0;
  std::optional<DichotomyFit> fit;
  std::string note;
};

struct TheoremVerdict {
  std::string name;
  /// Hypotheses that held on the computed interval.
  bool pointwise_hypothesis = true;
  NormStatus norm_status = NormStatus::Undetermined;
  /// The hypotheses held while the flow blew up: would contradict the theorem.
  bool contradiction = false;
  std::string diagnosis;
};

struct ExtensionReport {
  std::optional<StopReason> stop_reason;
  bool blew_up = false;
  double tightest_C = 0.0;
  bool initial_mean_convex = false;
  std::vector<NormVerdict> norms;
  std::vector<TheoremVerdict> theorems;
  /// Every accumulator the contrapositive requires to diverge does.
  bool consistent = true;
  std::string summary;
};

ExtensionReport extension_report(const FlowTrajectory& traj, std::span<const double> alphas,
                                 const DichotomyOptions& opts = {});

}  // namespace mcflab
