#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace mcflab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Closed polygonal curve in the plane (n = 1). Stored counter-clockwise.
class PlaneCurve {
 public:
  static constexpr std::size_t kMinSamples = 8;

  explicit PlaneCurve(std::vector<Vec2> points);

  std::span<const Vec2> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Vec2> points_;
};

/// Hypersurface of revolution in R^{n+1}: a meridian profile (axis coordinate,
/// radius) sampled pole to pole at equal steps of a profile parameter. Both
/// end samples lie on the axis (radius exactly zero).
class Revolution {
 public:
  static constexpr std::size_t kMinSamples = 16;

  Revolution(std::vector<Vec2> profile, int n);

  std::span<const Vec2> profile() const { return profile_; }
  std::size_t size() const { return profile_.size(); }
  int dimension() const { return n_; }

 private:
  std::vector<Vec2> profile_;
  int n_;
};

/// Round n-sphere of radius r centred at the origin, evolved in closed form.
class AnalyticSphere {
 public:
  AnalyticSphere(double radius, int n);

  double radius() const { return radius_; }
  int dimension() const { return n_; }

 private:
  double radius_;
  int n_;
};

using Immersion = std::variant<PlaneCurve, Revolution, AnalyticSphere>;

enum class Representation { PlaneCurve, Revolution, AnalyticSphere };

Representation representation(const Immersion& imm);
int dimension(const Immersion& imm);

// Per-sample geometry. The second fundamental form is stored through its
// principal values: kappa_axial is the single curvature of a plane curve or
// the meridian curvature of a revolution; kappa_rot is the rotational
// curvature with multiplicity n - 1. Normals live in the meridian plane
// (axis, radius) for revolution and sphere frames.
struct GeometryFrame {
  Representation kind = Representation::PlaneCurve;
  int n = 1;
  double t = 0.0;

  std::vector<Vec2> position;
  std::vector<double> g_axial;  // |dF/du|^2 in the sample-index parameter
  std::vector<double> g_rot;    // rho^2 (revolution), r^2 (sphere), empty for curves
  std::vector<double> kappa_axial;
  std::vector<double> kappa_rot;
  std::vector<double> H;
  std::vector<double> A2;
  std::vector<Vec2> normal;
  std::vector<Vec2> tangent;    // along increasing sample index
  std::vector<double> weight;   // quadrature weight of dmu per sample
  std::vector<double> segment;  // chord lengths between consecutive samples

  std::size_t size() const { return H.size(); }
  double total_area() const;
  double max_A2() const;
  double max_H2() const;
  double min_H() const;
  double min_kappa() const;
  /// Smallest chord length; +inf for the analytic sphere.
  double h_min() const;
};

GeometryFrame compute_geometry(const Immersion& imm, double t = 0.0);

double area_integral(const GeometryFrame& frame, std::span<const double> field);

/// Discrete Laplace-Beltrami operator, second order, conservative: the
/// weighted sum of the result against dmu telescopes to zero.
std::vector<double> laplace_beltrami(const GeometryFrame& frame, std::span<const double> field);

/// Derivative with respect to arclength along the curve or meridian
/// (central differences, symmetric about the poles).
std::vector<double> arclength_derivative(const GeometryFrame& frame, std::span<const double> field);

}  // namespace mcflab
