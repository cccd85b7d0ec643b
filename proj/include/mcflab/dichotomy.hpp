#pragma once

#include <cstddef>

#include "mcflab/flow.hpp"

namespace mcflab {

enum class Growth { Finite, Logarithmic, PowerDivergent };

std::string_view to_string(Growth g);

struct DichotomyOptions {
  /// |p + 1| within this band counts as logarithmic growth.
  double exponent_tolerance = 0.05;
  std::size_t min_samples = 20;
  /// Width of the fit window in decades of (T - t).
  double window_decades = 1.0;
};

struct DichotomyFit {
  Growth growth = Growth::Finite;
  /// p in  integral of |q|^alpha dmu  ~  C (T - t)^p.
  double rate_exponent = 0.0;
  double rate_prefactor = 0.0;
  /// Extrapolated limit of the accumulator (finite growth only, NaN otherwise).
  double finite_estimate = 0.0;
  /// -(p + 1) for power divergence, 0 otherwise.
  double divergence_exponent = 0.0;
  /// Slope of the accumulator against -log(T - t) over the window.
  double log_slope = 0.0;
  double t_est = 0.0;
  bool t_from_oracle = false;
  std::size_t samples = 0;
  /// Spatial integral non-decreasing across the window.
  bool rate_monotone_increasing = false;
};

/// Extrapolates the blow-up time from max|A|^2 ~ c / (T - t) over the last
/// two decades of curvature growth.
double estimate_blowup_time(const FlowTrajectory& traj);

DichotomyFit dichotomy_fit(const FlowTrajectory& traj, NormKey key, const DichotomyOptions& opts = {});

}  // namespace mcflab
