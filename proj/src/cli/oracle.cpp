#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <json.hpp>

#include "mcflab/cli/commands.hpp"
#include "mcflab/error.hpp"
#include "mcflab/oracles.hpp"

namespace mcflab::cli {

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 1 || !(a.r0 > 0.0) || !(a.alpha > 0.0) || !(a.t_end >= 0.0)) {
    err << "oracle: need n >= 1, r0 > 0, alpha > 0, t_end >= 0\n";
    return kExitConfig;
  }
  const SphereSolution sphere(a.n, a.r0);
  const double T = sphere.extinction_time();
  if (a.t_end > T * (1.0 + 1e-12)) {
    err << "oracle: t_end exceeds the extinction time " << T << '\n';
    return kExitConfig;
  }
  const double t_end = std::min(a.t_end, T);
  const double norm = sphere_spacetime_norm(a.n, a.r0, a.alpha, t_end);
  const bool infinite = std::isinf(norm);

  double quadrature = std::numeric_limits<double>::quiet_NaN();
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  if (!infinite && t_end > 0.0) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    // Integrate in tau = T - t so the endpoint singularity keeps full precision.
    const double area = unit_sphere_area(a.n);
    quadrature = integrator.integrate(
        [&](double tau) {
          return std::pow(a.n, a.alpha) * area * std::pow(2.0 * a.n * tau, 0.5 * (a.n - a.alpha));
        },
        T - t_end, T);
    rel_error = std::abs(quadrature - norm) / std::abs(norm);
  } else if (!infinite) {
    quadrature = 0.0;
    rel_error = 0.0;
  }

  const double r = t_end < T ? sphere.radius(t_end) : 0.0;
  const double H = t_end < T ? sphere.mean_curvature(t_end) : std::numeric_limits<double>::infinity();
  if (a.json) {
    nlohmann::json j;
    j["n"] = a.n;
    j["r0"] = a.r0;
    j["alpha"] = a.alpha;
    j["t_end"] = t_end;
    j["T"] = T;
    j["radius"] = r;
    j["H"] = std::isfinite(H) ? nlohmann::json(H) : nlohmann::json("inf");
    j["norm"] = infinite ? nlohmann::json("inf") : nlohmann::json(norm);
    j["norm_root"] = infinite ? nlohmann::json("inf") : nlohmann::json(std::pow(norm, 1.0 / a.alpha));
    j["quadrature"] = infinite ? nlohmann::json() : nlohmann::json(quadrature);
    j["quadrature_rel_error"] = infinite ? nlohmann::json() : nlohmann::json(rel_error);
    out << j.dump(2) << '\n';
  } else {
    out.precision(17);
    out << "T = " << T << '\n';
    out << "r(t_end) = " << r << '\n';
    out << "H(t_end) = ";
    if (std::isfinite(H)) {
      out << H << '\n';
    } else {
      out << "inf\n";
    }
    if (infinite) {
      out << "space-time integral = inf\n";
    } else {
      out << "space-time integral = " << norm << '\n';
      out << "norm = " << std::pow(norm, 1.0 / a.alpha) << '\n';
      out << "quadrature = " << quadrature << " (relative error " << rel_error << ")\n";
    }
  }
  return kExitOk;
}

}  // namespace mcflab::cli
