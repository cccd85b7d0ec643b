#include <algorithm>
#include <cmath>

#include "mcflab/analysis.hpp"
#include "mcflab/error.hpp"
#include "mcflab/oracles.hpp"

namespace mcflab {

double sobolev_constant(int n) {
  if (n < 2) throw Error(Errc::DimensionTooSmall, "Sobolev constant needs n >= 2");
  const double nd = n;
  return std::pow(2.0, nd) * std::pow(1.0 + nd, 1.0 + 1.0 / nd) / ((nd - 1.0) * unit_ball_volume(n + 1));
}

double MoserConstants::p_k(int k) const { return 0.5 * (n + 2.0) * std::pow(mu, k); }

MoserConstants moser_constants(int n, double T0, double sup_A, double t) {
  if (n < 3) throw Error(Errc::DimensionTooSmall, "the sup bound chain needs n >= 3");
  if (!(T0 > 0.0) || !(sup_A > 0.0) || !(t > 0.0)) {
    throw Error(Errc::NonPositiveInputs, "T0, sup|A| and t must be positive");
  }
  const double nd = n;
  MoserConstants c;
  c.n = n;
  c.T0 = T0;
  c.sup_A = sup_A;
  c.t = std::min(t, T0);
  c.beta = 2.0 * sup_A * sup_A;
  c.sobolev = sobolev_constant(n);
  c.p = 0.5 * (nd + 2.0);
  c.mu = 1.0 + 2.0 / nd;
  c.s = std::sqrt((2.0 / nd) * (c.p - 1.0) * T0 * c.beta) * (nd - 2.0) / std::sqrt(nd * (c.p - 1.0));
  c.D = std::sqrt((nd - 1.0) * c.p) * c.sobolev / ((nd - 2.0) * std::sqrt(c.p - 1.0));
  c.C2 = std::pow(c.D, 2.0 * nd / (nd + 2.0)) * std::pow(c.mu, 0.5 * nd) *
         (0.5 * (nd + 2.0) * c.beta + (nd + 2.0) / (2.0 * c.t));
  return c;
}

MoserReport verify_moser_bound(const FlowTrajectory& traj) {
  if (traj.n < 3) throw Error(Errc::DimensionTooSmall, "the sup bound needs n >= 3");
  if (traj.stop_reason != StopReason::ReachedTCap || traj.steps.size() < 3) {
    throw Error(Errc::TrajectoryTooShort, "the sup bound needs a trajectory that reached its t_cap");
  }
  const auto idx = traj.norm_index({Quantity::H, traj.n + 2.0});
  if (!idx) throw Error(Errc::UnregisteredNorm, "critical H accumulator missing");

  MoserReport r;
  r.T0 = traj.steps.back().t;
  double sup_A2 = 0.0;
  for (const auto& s : traj.steps) {
    sup_A2 = std::max(sup_A2, s.max_A2);
    if (s.t >= 0.5 * r.T0) r.lhs = std::max(r.lhs, s.max_H2);
  }
  r.sup_A = std::sqrt(sup_A2);
  r.spacetime_integral = traj.steps.back().acc[*idx];
  r.constants = moser_constants(traj.n, r.T0, r.sup_A, 0.5 * r.T0);
  r.rhs = r.constants.C2 * std::pow(r.spacetime_integral, 2.0 / (traj.n + 2.0));
  r.margin = r.rhs - r.lhs;
  r.falsified = r.margin < 0.0;
  return r;
}

}  // namespace mcflab
