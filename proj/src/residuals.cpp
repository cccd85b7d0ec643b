#include <algorithm>
#include <cmath>

#include "mcflab/analysis.hpp"
#include "mcflab/error.hpp"

namespace mcflab {

std::string_view to_string(Equation eq) {
  switch (eq) {
    case Equation::Metric: return "metric";
    case Equation::Normal: return "normal";
    case Equation::SecondFundamentalForm: return "h";
    case Equation::MeanCurvature: return "H";
    case Equation::NormSquared: return "A2";
  }
  return "unknown";
}

double ResidualField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double PinchingResidual::max_gradient_term() const {
  return gradient_term.empty() ? 0.0 : *std::max_element(gradient_term.begin(), gradient_term.end());
}

namespace {

// Three kept frames from consecutive steps around index k.
struct Stencil {
  const GeometryFrame& prev;
  const GeometryFrame& mid;
  const GeometryFrame& next;
  double w_prev;
  double w_mid;
  double w_next;

  double ddt(double a, double b, double c) const { return w_prev * a + w_mid * b + w_next * c; }
  template <class F>
  double ddt(std::size_t j, F field) const {
    return ddt(field(prev, j), field(mid, j), field(next, j));
  }
};

Stencil make_stencil(const FlowTrajectory& traj, std::size_t k) {
  if (traj.config.redistribute) {
    throw Error(Errc::RedistributionActive, "residuals need the pure normal flow");
  }
  if (k == 0 || k + 1 >= traj.frames.size()) {
    throw Error(Errc::IndexOutOfRange, "frame " + std::to_string(k) + " has no neighbours on both sides");
  }
  const auto& a = traj.frames[k - 1];
  const auto& b = traj.frames[k];
  const auto& c = traj.frames[k + 1];
  if (b.step != a.step + 1 || c.step != b.step + 1) {
    throw Error(Errc::NonConsecutiveFrames, "frames around " + std::to_string(k) + " are not consecutive steps");
  }
  const double hm = b.frame.t - a.frame.t;
  const double hp = c.frame.t - b.frame.t;
  return {a.frame,
          b.frame,
          c.frame,
          -hp / (hm * (hm + hp)),
          (hp - hm) / (hm * hp),
          hm / (hp * (hm + hp))};
}

std::vector<std::size_t> residual_samples(const GeometryFrame& f) {
  std::vector<std::size_t> s;
  const std::size_t m = f.size();
  if (f.kind == Representation::Revolution) {
    for (std::size_t j = 1; j + 1 < m; ++j) s.push_back(j);
  } else {
    for (std::size_t j = 0; j < m; ++j) s.push_back(j);
  }
  return s;
}

// Derived per-sample fields on the middle frame.
struct Fields {
  std::vector<double> lap_H, lap_A2, lap_k1, lap_k2;
  std::vector<double> ds_H, ds_k1, ds_k2;
  std::vector<double> q;  // rho_s / rho on revolution frames

  explicit Fields(const GeometryFrame& f) {
    const std::size_t m = f.size();
    lap_H = laplace_beltrami(f, f.H);
    lap_A2 = laplace_beltrami(f, f.A2);
    lap_k1 = laplace_beltrami(f, f.kappa_axial);
    ds_H = arclength_derivative(f, f.H);
    ds_k1 = arclength_derivative(f, f.kappa_axial);
    q.assign(m, 0.0);
    if (f.kind != Representation::PlaneCurve) {
      lap_k2 = laplace_beltrami(f, f.kappa_rot);
      ds_k2 = arclength_derivative(f, f.kappa_rot);
    } else {
      lap_k2.assign(m, 0.0);
      ds_k2.assign(m, 0.0);
    }
    if (f.kind == Representation::Revolution) {
      for (std::size_t j = 1; j + 1 < m; ++j) q[j] = f.tangent[j].y / f.position[j].y;
    }
  }
};

}  // namespace

ResidualField evolution_residual(const FlowTrajectory& traj, std::size_t k, Equation eq) {
  const Stencil st = make_stencil(traj, k);
  const GeometryFrame& f = st.mid;
  const Fields d(f);
  const int n = f.n;
  const bool curve = f.kind == Representation::PlaneCurve;
  // Rotational components carry multiplicity n - 1.
  const double mult = curve ? 0.0 : n - 1.0;

  ResidualField out;
  out.samples = residual_samples(f);
  out.values.reserve(out.samples.size());
  for (std::size_t j : out.samples) {
    const double k1 = f.kappa_axial[j];
    const double k2 = curve ? 0.0 : f.kappa_rot[j];
    const double H = f.H[j];
    const double A2 = f.A2[j];
    double value = 0.0;
    switch (eq) {
      case Equation::Metric: {
        const double ax = st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.g_axial[i]; }) /
                              f.g_axial[j] + 2.0 * H * k1;
        double rot = 0.0;
        if (!curve) {
          rot = st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.g_rot[i]; }) / f.g_rot[j] +
                2.0 * H * k2;
        }
        value = curve ? ax : std::sqrt(ax * ax + mult * rot * rot);
        break;
      }
      case Equation::Normal: {
        const double nx = st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.normal[i].x; });
        const double ny = st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.normal[i].y; });
        const Vec2 grad_H = d.ds_H[j] * f.tangent[j];
        value = norm(Vec2{nx, ny} - grad_H);
        break;
      }
      case Equation::SecondFundamentalForm: {
        // d/dt h_ij in coordinates, read in the orthonormal principal frame.
        const double dh_ax =
            st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.kappa_axial[i] * g.g_axial[i]; }) /
            f.g_axial[j];
        // q^2 (k1 - k2) rewritten through Codazzi as q d_s k2.
        const double q2 = d.q[j] * d.ds_k2[j];
        const double rough_ax = d.lap_k1[j] - 2.0 * mult * q2;
        const double ax = dh_ax - (rough_ax - 2.0 * H * k1 * k1 + A2 * k1);
        double rot = 0.0;
        if (!curve) {
          const double dh_rot =
              st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.kappa_rot[i] * g.g_rot[i]; }) /
              f.g_rot[j];
          const double rough_rot = d.lap_k2[j] + 2.0 * q2;
          rot = dh_rot - (rough_rot - 2.0 * H * k2 * k2 + A2 * k2);
        }
        value = curve ? ax : std::sqrt(ax * ax + mult * rot * rot);
        break;
      }
      case Equation::MeanCurvature:
        value = st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.H[i]; }) - (d.lap_H[j] + A2 * H);
        break;
      case Equation::NormSquared: {
        const double grad_A2 = d.ds_k1[j] * d.ds_k1[j] + 3.0 * mult * d.ds_k2[j] * d.ds_k2[j];
        value = st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.A2[i]; }) -
                (d.lap_A2[j] - 2.0 * grad_A2 + 2.0 * A2 * A2);
        break;
      }
    }
    out.values.push_back(value);
  }
  return out;
}

PinchingResidual pinching_evolution_residual(const FlowTrajectory& traj, std::size_t k) {
  const Stencil st = make_stencil(traj, k);
  for (const GeometryFrame* g : {&st.prev, &st.mid, &st.next}) {
    if (!(g->min_H() > 0.0)) throw Error(Errc::NonPositiveH, "pinching ratio needs H > 0 on frames k-1..k+1");
  }
  const GeometryFrame& f = st.mid;
  const Fields d(f);
  const bool curve = f.kind == Representation::PlaneCurve;
  const double mult = curve ? 0.0 : f.n - 1.0;

  std::vector<double> ratio(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) ratio[j] = f.A2[j] / (f.H[j] * f.H[j]);
  const auto lap_ratio = laplace_beltrami(f, ratio);
  const auto ds_ratio = arclength_derivative(f, ratio);

  PinchingResidual out;
  out.residual.samples = residual_samples(f);
  for (std::size_t j : out.residual.samples) {
    const double H = f.H[j];
    const double k1 = f.kappa_axial[j];
    const double k2 = curve ? 0.0 : f.kappa_rot[j];
    const double Hs = d.ds_H[j];
    // |H grad_i h_jk - grad_i H h_jk|^2 with Codazzi-symmetric grad h.
    const double axial = H * d.ds_k1[j] - Hs * k1;
    const double rot = H * d.ds_k2[j] - Hs * k2;
    const double mixed = H * d.ds_k2[j];
    const double square = axial * axial + mult * rot * rot + 2.0 * mult * mixed * mixed;
    const double gradient_term = -2.0 * square / (H * H * H * H);
    const double lhs = st.ddt(j, [](const GeometryFrame& g, std::size_t i) { return g.A2[i] / (g.H[i] * g.H[i]); });
    const double rhs = lap_ratio[j] + 2.0 / H * Hs * ds_ratio[j] + gradient_term;
    out.residual.values.push_back(lhs - rhs);
    out.gradient_term.push_back(gradient_term);
  }
  return out;
}

}  // namespace mcflab
