#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mcflab/geometry.hpp"

namespace mcflab::test {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<Vec2> circle_points(double r, std::size_t m, double phase = 0.0) {
  std::vector<Vec2> p(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double th = phase + 2.0 * kPi * j / m;
    p[j] = {r * std::cos(th), r * std::sin(th)};
  }
  return p;
}

/// Star-shaped curve r(theta) = r0 (1 + sum eps_k cos(k theta + phi_k)).
inline std::vector<Vec2> wavy_points(std::mt19937& rng, std::size_t m) {
  std::uniform_real_distribution<double> amp(-0.04, 0.04), phase(0.0, 2.0 * kPi), rad(0.5, 2.0);
  const double r0 = rad(rng);
  double eps[4], phi[4];
  for (int k = 0; k < 4; ++k) {
    eps[k] = amp(rng);
    phi[k] = phase(rng);
  }
  std::vector<Vec2> p(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double th = 2.0 * kPi * j / m;
    double r = 1.0;
    for (int k = 0; k < 4; ++k) r += eps[k] * std::cos((k + 2) * th + phi[k]);
    p[j] = {r0 * r * std::cos(th), r0 * r * std::sin(th)};
  }
  return p;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace mcflab::test
