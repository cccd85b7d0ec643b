#include "mcflab/oracles.hpp"

#include <limits>
#include <numbers>
#include <string>

#include "mcflab/error.hpp"

namespace mcflab {

double unit_sphere_area(int k) {
  const double d = k + 1;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

SphereSolution::SphereSolution(int n, double r0) : n_(n), r0_(r0) {
  if (n < 1 || !(r0 > 0.0) || !std::isfinite(r0)) {
    throw Error(Errc::NonPositiveInputs, "sphere solution needs n >= 1 and r0 > 0");
  }
}

double SphereSolution::radius(double t) const { return std::sqrt(r0_ * r0_ - 2.0 * n_ * t); }
double SphereSolution::mean_curvature(double t) const { return n_ / radius(t); }
double SphereSolution::norm_A2(double t) const { return n_ / (r0_ * r0_ - 2.0 * n_ * t); }
double SphereSolution::area(double t) const { return unit_sphere_area(n_) * std::pow(radius(t), n_); }

namespace {

// n^alpha (2n)^{(n-alpha)/2} |S^n|: the spatial integral of |H|^alpha is this
// constant times (T - t)^{(n-alpha)/2}, independently of r0.
double sphere_norm_constant(int n, double alpha) {
  const double e = 0.5 * (n - alpha);
  return std::pow(n, alpha) * std::pow(2.0 * n, e) * unit_sphere_area(n);
}

}  // namespace

double sphere_spatial_integral(int n, double r0, double alpha, double t) {
  const SphereSolution s(n, r0);
  const double T = s.extinction_time();
  if (!(t >= 0.0 && t < T)) throw Error(Errc::NonPositiveInputs, "time outside [0, T)");
  return sphere_norm_constant(n, alpha) * std::pow(T - t, 0.5 * (n - alpha));
}

double sphere_spacetime_norm(int n, double r0, double alpha, double t_end) {
  const SphereSolution s(n, r0);
  const double T = s.extinction_time();
  if (!(alpha > 0.0)) throw Error(Errc::NonPositiveInputs, "alpha must be positive");
  if (!(t_end > 0.0 && t_end <= T)) throw Error(Errc::NonPositiveInputs, "t_end outside (0, T]");
  const double inf = std::numeric_limits<double>::infinity();
  const double e = 0.5 * (n - alpha);
  const double rest = T - t_end;
  double time_integral = 0.0;
  if (std::abs(e + 1.0) < 1e-12) {
    time_integral = rest == 0.0 ? inf : std::log(T / rest);
  } else if (rest == 0.0) {
    time_integral = e + 1.0 > 0.0 ? std::pow(T, e + 1.0) / (e + 1.0) : inf;
  } else {
    time_integral = (std::pow(T, e + 1.0) - std::pow(rest, e + 1.0)) / (e + 1.0);
  }
  return sphere_norm_constant(n, alpha) * time_integral;
}

namespace {

std::vector<double> profile_parameters(std::size_t m) {
  std::vector<double> u(m);
  for (std::size_t j = 0; j < m; ++j) u[j] = std::numbers::pi * static_cast<double>(j) / (m - 1);
  return u;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::BadShapeParameters, what);
}

Revolution revolution_from(std::size_t m, int n, auto axial, auto radial) {
  require(m >= Revolution::kMinSamples, "revolution profiles need m >= 16");
  require(n >= 2, "revolution profiles need n >= 2");
  std::vector<Vec2> pts(m);
  const auto u = profile_parameters(m);
  for (std::size_t j = 0; j < m; ++j) pts[j] = {axial(u[j]), radial(u[j])};
  pts.front().y = 0.0;
  pts.back().y = 0.0;
  return Revolution(std::move(pts), n);
}

// rho(u) = sin(u) (neck + k cos^2 u) has interior maxima
// (2/3)(neck + k)^{3/2} / sqrt(3k), increasing in k from `neck` at k = neck/2.
double dumbbell_blend(double neck, double bulb) {
  const auto peak = [neck](double k) { return 2.0 / 3.0 * std::pow(neck + k, 1.5) / std::sqrt(3.0 * k); };
  double lo = 0.5 * neck;
  double hi = neck + 1.0;
  while (peak(hi) < bulb) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (peak(mid) < bulb ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Immersion make_initial(const InitialShape& shape) {
  struct Visitor {
    Immersion operator()(const CircleShape& s) const {
      require(s.r0 > 0.0, "circle radius must be positive");
      require(s.m >= PlaneCurve::kMinSamples, "plane curves need m >= 8");
      std::vector<Vec2> pts(s.m);
      for (std::size_t j = 0; j < s.m; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / s.m;
        pts[j] = {s.r0 * std::cos(th), s.r0 * std::sin(th)};
      }
      return PlaneCurve(std::move(pts));
    }
    Immersion operator()(const EllipseShape& s) const {
      require(s.a > 0.0 && s.b > 0.0, "ellipse semi-axes must be positive");
      require(s.m >= PlaneCurve::kMinSamples, "plane curves need m >= 8");
      std::vector<Vec2> pts(s.m);
      for (std::size_t j = 0; j < s.m; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / s.m;
        pts[j] = {s.a * std::cos(th), s.b * std::sin(th)};
      }
      return PlaneCurve(std::move(pts));
    }
    Immersion operator()(const SphereProfileShape& s) const {
      require(s.r0 > 0.0, "sphere radius must be positive");
      const double r = s.r0;
      return revolution_from(s.m, s.n, [r](double u) { return -r * std::cos(u); },
                             [r](double u) { return r * std::sin(u); });
    }
    Immersion operator()(const SpheroidShape& s) const {
      require(s.axial > 0.0 && s.radial > 0.0, "spheroid semi-axes must be positive");
      const double a = s.axial;
      const double b = s.radial;
      return revolution_from(s.m, s.n, [a](double u) { return -a * std::cos(u); },
                             [b](double u) { return b * std::sin(u); });
    }
    Immersion operator()(const DumbbellShape& s) const {
      require(s.neck > 0.0 && s.bulb > 0.0, "dumbbell radii must be positive");
      require(s.neck < s.bulb, "dumbbell neck must be thinner than the bulbs");
      const double k = dumbbell_blend(s.neck, s.bulb);
      // Bulb centres sit at cos(u) = +-c; stretch the axis so each cap is
      // about one bulb radius long.
      const double c = std::sqrt(1.0 - (s.neck + k) / (3.0 * k));
      const double half_length = s.bulb / (1.0 - c);
      const double neck = s.neck;
      return revolution_from(s.m, s.n, [half_length](double u) { return -half_length * std::cos(u); },
                             [neck, k](double u) {
                               const double cu = std::cos(u);
                               return std::sin(u) * (neck + k * cu * cu);
                             });
    }
  };
  return std::visit(Visitor{}, shape);
}

}  // namespace mcflab
