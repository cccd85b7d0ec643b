#include "mcflab/dichotomy.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mcflab/error.hpp"

namespace mcflab {

namespace {

struct LineFit {
  double intercept;
  double slope;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

}  // namespace

std::string_view to_string(Growth g) {
  switch (g) {
    case Growth::Finite: return "finite";
    case Growth::Logarithmic: return "logarithmic";
    case Growth::PowerDivergent: return "power";
  }
  return "unknown";
}

double estimate_blowup_time(const FlowTrajectory& traj) {
  if (traj.steps.size() < 3) throw Error(Errc::InsufficientSamples, "need at least 3 steps to extrapolate T");
  const double final_A2 = traj.steps.back().max_A2;
  std::vector<double> t, inv;
  for (const auto& r : traj.steps) {
    if (r.max_A2 >= 0.01 * final_A2) {
      t.push_back(r.t);
      inv.push_back(1.0 / r.max_A2);
    }
  }
  if (t.size() < 3) throw Error(Errc::InsufficientSamples, "curvature tail too short to extrapolate T");
  const LineFit fit = least_squares(t, inv);
  if (!(fit.slope < 0.0)) throw Error(Errc::InsufficientSamples, "curvature is not growing; no blow-up time");
  return -fit.intercept / fit.slope;
}

DichotomyFit dichotomy_fit(const FlowTrajectory& traj, NormKey key, const DichotomyOptions& opts) {
  const auto idx = traj.norm_index(key);
  if (!idx) throw Error(Errc::UnregisteredNorm, key.label() + " is not accumulated by this trajectory");
  if (traj.stop_reason != StopReason::CurvatureBlowup && traj.stop_reason != StopReason::StepUnderflow) {
    throw Error(Errc::InsufficientSamples, "trajectory did not stop near a blow-up");
  }
  DichotomyFit out;
  out.t_from_oracle = traj.exact_T.has_value();
  out.t_est = traj.exact_T ? *traj.exact_T : estimate_blowup_time(traj);
  const auto& last = traj.steps.back();
  const double tau_last = out.t_est - last.t;
  if (!(tau_last > 0.0)) throw Error(Errc::InsufficientSamples, "estimated blow-up time precedes the last step");

  const double tau_max = tau_last * std::pow(10.0, opts.window_decades);
  std::vector<double> log_tau, log_rate, acc, neg_log_tau;
  bool monotone = true;
  double prev_rate = -std::numeric_limits<double>::infinity();
  for (const auto& r : traj.steps) {
    const double tau = out.t_est - r.t;
    if (!(tau > 0.0) || tau > tau_max) continue;
    const double rate = r.spatial[*idx];
    if (!(rate > 0.0)) continue;
    monotone = monotone && rate >= prev_rate;
    prev_rate = rate;
    log_tau.push_back(std::log(tau));
    log_rate.push_back(std::log(rate));
    acc.push_back(r.acc[*idx]);
    neg_log_tau.push_back(-std::log(tau));
  }
  out.samples = log_tau.size();
  if (out.samples < opts.min_samples) {
    throw Error(Errc::InsufficientSamples, std::to_string(out.samples) + " samples in the final window, need " +
                                               std::to_string(opts.min_samples));
  }
  out.rate_monotone_increasing = monotone;

  const LineFit rate_fit = least_squares(log_tau, log_rate);
  out.rate_exponent = rate_fit.slope;
  out.rate_prefactor = std::exp(rate_fit.intercept);
  out.log_slope = least_squares(neg_log_tau, acc).slope;

  const double p = out.rate_exponent;
  if (p > -1.0 + opts.exponent_tolerance) {
    out.growth = Growth::Finite;
    out.finite_estimate = last.acc[*idx] + out.rate_prefactor * std::pow(tau_last, p + 1.0) / (p + 1.0);
  } else if (p >= -1.0 - opts.exponent_tolerance) {
    out.growth = Growth::Logarithmic;
    out.finite_estimate = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.growth = Growth::PowerDivergent;
    out.finite_estimate = std::numeric_limits<double>::quiet_NaN();
    out.divergence_exponent = -(p + 1.0);
  }
  return out;
}

}  // namespace mcflab
