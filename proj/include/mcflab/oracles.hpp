#pragma once

#include <cstddef>
#include <variant>

#include "mcflab/geometry.hpp"

namespace mcflab {

/// Area of the unit k-sphere S^k in R^{k+1}.
double unit_sphere_area(int k);
/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// The shrinking round sphere r(t) = sqrt(r0^2 - 2 n t).
class SphereSolution {
 public:
  SphereSolution(int n, double r0);

  int n() const { return n_; }
  double r0() const { return r0_; }
  double extinction_time() const { return r0_ * r0_ / (2.0 * n_); }

  double radius(double t) const;
  double mean_curvature(double t) const;
  double norm_A2(double t) const;
  double area(double t) const;

 private:
  int n_;
  double r0_;
};

/// Closed form of the space-time integral of |H|^alpha over the shrinking
/// sphere on [0, t_end]. Returns +infinity when t_end = T and alpha >= n + 2.
double sphere_spacetime_norm(int n, double r0, double alpha, double t_end);

/// Spatial integral of |H|^alpha over the sphere at time t.
double sphere_spatial_integral(int n, double r0, double alpha, double t);

struct CircleShape {
  double r0;
  std::size_t m;
};
struct EllipseShape {
  double a;
  double b;
  std::size_t m;
};
struct SphereProfileShape {
  double r0;
  std::size_t m;
  int n;
};
/// Spheroid of revolution: semi-axis `axial` along the axis, `radial` across.
struct SpheroidShape {
  double axial;
  double radial;
  std::size_t m;
  int n;
};
/// Two bulbs of radius ~`bulb` joined by a neck of radius `neck`.
struct DumbbellShape {
  double neck;
  double bulb;
  std::size_t m;
  int n;
};

using InitialShape =
    std::variant<CircleShape, EllipseShape, SphereProfileShape, SpheroidShape, DumbbellShape>;

Immersion make_initial(const InitialShape& shape);

}  // namespace mcflab
