#include "mcflab/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mcflab/error.hpp"
#include "mcflab/oracles.hpp"

namespace mcflab {

namespace {

constexpr double kMinSegment = 1e-14;
constexpr double kMinRadius = 1e-12;

bool finite(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double signed_area(std::span<const Vec2> pts) {
  double a = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    a += cross(pts[j], pts[(j + 1) % pts.size()]);
  }
  return 0.5 * a;
}

// Proper crossing of segments [a,b] and [c,d] (shared endpoints excluded).
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void check_length(const GeometryFrame& frame, std::span<const double> field) {
  if (field.size() != frame.size()) {
    throw Error(Errc::LengthMismatch, "field has " + std::to_string(field.size()) +
                                          " samples, frame has " + std::to_string(frame.size()));
  }
}

GeometryFrame curve_geometry(const PlaneCurve& curve) {
  const auto pts = curve.points();
  const std::size_t m = pts.size();
  GeometryFrame f;
  f.kind = Representation::PlaneCurve;
  f.n = 1;
  f.position.assign(pts.begin(), pts.end());
  f.segment.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    f.segment[j] = norm(pts[j + 1 < m ? j + 1 : 0] - pts[j]);
    if (!(f.segment[j] >= kMinSegment)) {
      throw Error(Errc::DegenerateGeometry, "segment " + std::to_string(j) + " has length " +
                                                std::to_string(f.segment[j]));
    }
  }
  f.g_axial.resize(m);
  f.kappa_axial.resize(m);
  f.normal.resize(m);
  f.tangent.resize(m);
  f.weight.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t jm = j == 0 ? m - 1 : j - 1;
    const Vec2 prev = pts[jm];
    const Vec2 next = pts[j + 1 < m ? j + 1 : 0];
    const Vec2 d = 0.5 * (next - prev);
    const Vec2 dd = next - 2.0 * pts[j] + prev;
    const double speed = norm(d);
    const Vec2 tan = (1.0 / speed) * d;
    f.g_axial[j] = speed * speed;
    f.tangent[j] = tan;
    f.normal[j] = {tan.y, -tan.x};
    f.kappa_axial[j] = cross(d, dd) / (speed * speed * speed);
    f.weight[j] = 0.5 * (f.segment[jm] + f.segment[j]);
  }
  f.H = f.kappa_axial;
  f.A2.resize(m);
  for (std::size_t j = 0; j < m; ++j) f.A2[j] = f.kappa_axial[j] * f.kappa_axial[j];
  return f;
}

GeometryFrame revolution_geometry(const Revolution& rev) {
  const auto pts = rev.profile();
  const std::size_t m = pts.size();
  const int n = rev.dimension();
  const double sphere = unit_sphere_area(n - 1);
  GeometryFrame f;
  f.kind = Representation::Revolution;
  f.n = n;
  f.position.assign(pts.begin(), pts.end());
  f.segment.resize(m - 1);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    f.segment[j] = norm(pts[j + 1] - pts[j]);
    if (!(f.segment[j] >= kMinSegment)) {
      throw Error(Errc::DegenerateGeometry, "profile segment " + std::to_string(j) +
                                                " has length " + std::to_string(f.segment[j]));
    }
  }
  for (std::size_t j = 1; j + 1 < m; ++j) {
    if (!(pts[j].y >= kMinRadius)) {
      throw Error(Errc::DegenerateGeometry, "profile radius " + std::to_string(pts[j].y) +
                                                " at interior sample " + std::to_string(j));
    }
  }
  const auto mirror = [](Vec2 p) { return Vec2{p.x, -p.y}; };
  f.g_axial.resize(m);
  f.g_rot.resize(m);
  f.kappa_axial.resize(m);
  f.kappa_rot.resize(m);
  f.normal.resize(m);
  f.tangent.resize(m);
  f.weight.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2 prev = j == 0 ? mirror(pts[1]) : pts[j - 1];
    const Vec2 next = j + 1 == m ? mirror(pts[m - 2]) : pts[j + 1];
    const Vec2 d = 0.5 * (next - prev);
    const Vec2 dd = next - 2.0 * pts[j] + prev;
    const double speed = norm(d);
    const Vec2 tan = (1.0 / speed) * d;
    // The profile runs left to right above the axis, i.e. clockwise.
    f.tangent[j] = tan;
    f.normal[j] = {-tan.y, tan.x};
    f.g_axial[j] = speed * speed;
    f.g_rot[j] = pts[j].y * pts[j].y;
    f.kappa_axial[j] = -cross(d, dd) / (speed * speed * speed);
    const bool pole = j == 0 || j + 1 == m;
    // At a pole the surface is umbilic: the rotational curvature tends to the
    // meridian curvature.
    f.kappa_rot[j] = pole ? f.kappa_axial[j] : tan.x / pts[j].y;
    if (pole) {
      const double ell = f.segment[j == 0 ? 0 : m - 2];
      const double rho_nb = pts[j == 0 ? 1 : m - 2].y;
      f.weight[j] = sphere * ipow(0.5 * rho_nb, n - 1) * ell / (2.0 * n);
    } else {
      f.weight[j] = sphere * ipow(pts[j].y, n - 1) * 0.5 * (f.segment[j - 1] + f.segment[j]);
    }
  }
  f.H.resize(m);
  f.A2.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double k1 = f.kappa_axial[j];
    const double k2 = f.kappa_rot[j];
    f.H[j] = k1 + (n - 1) * k2;
    f.A2[j] = k1 * k1 + (n - 1) * k2 * k2;
  }
  return f;
}

GeometryFrame sphere_geometry(const AnalyticSphere& s) {
  const double r = s.radius();
  const int n = s.dimension();
  GeometryFrame f;
  f.kind = Representation::AnalyticSphere;
  f.n = n;
  f.position = {Vec2{0.0, r}};
  f.g_axial = {r * r};
  f.g_rot = {r * r};
  f.kappa_axial = {1.0 / r};
  f.kappa_rot = {1.0 / r};
  f.H = {n / r};
  f.A2 = {n / (r * r)};
  f.normal = {Vec2{0.0, 1.0}};
  f.tangent = {Vec2{1.0, 0.0}};
  f.weight = {unit_sphere_area(n) * std::pow(r, n)};
  return f;
}

}  // namespace

PlaneCurve::PlaneCurve(std::vector<Vec2> points) : points_(std::move(points)) {
  const std::size_t m = points_.size();
  if (m < kMinSamples) {
    throw Error(Errc::InvalidImmersion, "plane curve needs at least 8 points, got " + std::to_string(m));
  }
  const auto at = [&](std::size_t j) -> const Vec2& { return points_[j < m ? j : j - m]; };
  for (std::size_t j = 0; j < m; ++j) {
    if (!finite(points_[j])) throw Error(Errc::InvalidImmersion, "non-finite point " + std::to_string(j));
    const Vec2& next = at(j + 1);
    if (next.x == points_[j].x && next.y == points_[j].y) {
      throw Error(Errc::InvalidImmersion, "repeated point at index " + std::to_string(j));
    }
  }
  // Best effort simplicity check: each segment against the one after next.
  for (std::size_t j = 0; j < m; ++j) {
    if (segments_cross(points_[j], at(j + 1), at(j + 2), at(j + 3))) {
      throw Error(Errc::InvalidImmersion, "self-intersection near index " + std::to_string(j));
    }
  }
  if (signed_area(points_) < 0.0) std::reverse(points_.begin(), points_.end());
}

Revolution::Revolution(std::vector<Vec2> profile, int n) : profile_(std::move(profile)), n_(n) {
  const std::size_t m = profile_.size();
  if (n_ < 2) throw Error(Errc::InvalidImmersion, "revolution needs n >= 2, got " + std::to_string(n_));
  if (m < kMinSamples) {
    throw Error(Errc::InvalidImmersion, "revolution profile needs at least 16 samples, got " + std::to_string(m));
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!finite(profile_[j])) throw Error(Errc::InvalidImmersion, "non-finite profile sample " + std::to_string(j));
  }
  if (profile_.front().y != 0.0 || profile_.back().y != 0.0) {
    throw Error(Errc::InvalidImmersion, "profile must meet the axis at both ends");
  }
  if (profile_.front().x > profile_.back().x) std::reverse(profile_.begin(), profile_.end());
}

AnalyticSphere::AnalyticSphere(double radius, int n) : radius_(radius), n_(n) {
  if (!(std::isfinite(radius) && radius > 0.0)) {
    throw Error(Errc::InvalidImmersion, "sphere radius must be finite and positive");
  }
  if (n < 1) throw Error(Errc::InvalidImmersion, "sphere dimension must be >= 1");
}

Representation representation(const Immersion& imm) {
  return static_cast<Representation>(imm.index());
}

int dimension(const Immersion& imm) {
  struct Visitor {
    int operator()(const PlaneCurve&) const { return 1; }
    int operator()(const Revolution& r) const { return r.dimension(); }
    int operator()(const AnalyticSphere& s) const { return s.dimension(); }
  };
  return std::visit(Visitor{}, imm);
}

double GeometryFrame::total_area() const {
  double a = 0.0;
  for (double w : weight) a += w;
  return a;
}

double GeometryFrame::max_A2() const { return *std::max_element(A2.begin(), A2.end()); }

double GeometryFrame::max_H2() const {
  double m = 0.0;
  for (double h : H) m = std::max(m, h * h);
  return m;
}

double GeometryFrame::min_H() const { return *std::min_element(H.begin(), H.end()); }

double GeometryFrame::min_kappa() const {
  double k = *std::min_element(kappa_axial.begin(), kappa_axial.end());
  if (n >= 2) k = std::min(k, *std::min_element(kappa_rot.begin(), kappa_rot.end()));
  return k;
}

double GeometryFrame::h_min() const {
  if (segment.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(segment.begin(), segment.end());
}

GeometryFrame compute_geometry(const Immersion& imm, double t) {
  GeometryFrame f = std::visit(
      [](const auto& shape) -> GeometryFrame {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, PlaneCurve>) {
          return curve_geometry(shape);
        } else if constexpr (std::is_same_v<T, Revolution>) {
          return revolution_geometry(shape);
        } else {
          return sphere_geometry(shape);
        }
      },
      imm);
  f.t = t;
  return f;
}

double area_integral(const GeometryFrame& frame, std::span<const double> field) {
  check_length(frame, field);
  double sum = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j) sum += field[j] * frame.weight[j];
  return sum;
}

std::vector<double> laplace_beltrami(const GeometryFrame& frame, std::span<const double> field) {
  if (frame.kind == Representation::AnalyticSphere) {
    for (double v : field) {
      if (v != field.front()) {
        throw Error(Errc::UnsupportedRepresentation,
                    "analytic sphere frames carry a single homogeneous sample");
      }
    }
  }
  check_length(frame, field);
  const std::size_t m = field.size();
  std::vector<double> out(m, 0.0);
  switch (frame.kind) {
    case Representation::AnalyticSphere:
      break;
    case Representation::PlaneCurve: {
      const auto& ell = frame.segment;
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t jp = j + 1 < m ? j + 1 : 0;
        const std::size_t jm = j == 0 ? m - 1 : j - 1;
        const double fwd = (field[jp] - field[j]) / ell[j];
        const double bwd = (field[j] - field[jm]) / ell[jm];
        out[j] = (fwd - bwd) / (0.5 * (ell[jm] + ell[j]));
      }
      break;
    }
    case Representation::Revolution: {
      const int n = frame.n;
      const auto& ell = frame.segment;
      const auto rho = [&](std::size_t j) { return frame.position[j].y; };
      std::vector<double> flux(m - 1);
      for (std::size_t j = 0; j + 1 < m; ++j) {
        flux[j] = ipow(0.5 * (rho(j) + rho(j + 1)), n - 1) * (field[j + 1] - field[j]) / ell[j];
      }
      out[0] = 2.0 * n * (field[1] - field[0]) / (ell[0] * ell[0]);
      out[m - 1] = 2.0 * n * (field[m - 2] - field[m - 1]) / (ell[m - 2] * ell[m - 2]);
      for (std::size_t j = 1; j + 1 < m; ++j) {
        out[j] = (flux[j] - flux[j - 1]) / (ipow(rho(j), n - 1) * 0.5 * (ell[j - 1] + ell[j]));
      }
      break;
    }
  }
  return out;
}

std::vector<double> arclength_derivative(const GeometryFrame& frame, std::span<const double> field) {
  check_length(frame, field);
  const std::size_t m = field.size();
  std::vector<double> out(m, 0.0);
  const auto& ell = frame.segment;
  switch (frame.kind) {
    case Representation::AnalyticSphere:
      break;
    case Representation::PlaneCurve:
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t jp = j + 1 < m ? j + 1 : 0;
        const std::size_t jm = j == 0 ? m - 1 : j - 1;
        out[j] = (field[jp] - field[jm]) / (ell[jm] + ell[j]);
      }
      break;
    case Representation::Revolution:
      // Rotationally symmetric fields are even through the poles.
      for (std::size_t j = 1; j + 1 < m; ++j) {
        out[j] = (field[j + 1] - field[j - 1]) / (ell[j - 1] + ell[j]);
      }
      break;
  }
  return out;
}

}  // namespace mcflab
