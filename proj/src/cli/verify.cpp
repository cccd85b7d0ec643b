#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcflab/cli/artifacts.hpp"
#include "mcflab/cli/commands.hpp"
#include "mcflab/cli/config.hpp"
#include "mcflab/error.hpp"
#include "mcflab/oracles.hpp"

namespace mcflab::cli {

namespace {

using nlohmann::json;

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  json extra = json::object();
};

json encode(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

std::vector<double> list_or(const json& block, const char* key, std::vector<double> fallback) {
  if (!block.contains(key)) return fallback;
  const json& v = block.at(key);
  if (!v.is_array() || v.empty()) throw Error(Errc::InvalidConfig, std::string("verify.") + key + " must be a non-empty list");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(Errc::InvalidConfig, std::string("verify.") + key + " entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

double number_or(const json& block, const char* key, double fallback) {
  if (!block.contains(key) || block.at(key).is_null()) return fallback;
  if (!block.at(key).is_number()) throw Error(Errc::InvalidConfig, std::string("verify.") + key + " must be a number");
  return block.at(key).get<double>();
}

Quantity quantity_or(const json& block, Quantity fallback) {
  if (!block.contains("quantity")) return fallback;
  const auto q = block.at("quantity").get<std::string>();
  if (q == "A") return Quantity::A;
  if (q == "H") return Quantity::H;
  throw Error(Errc::InvalidConfig, "verify.quantity must be \"A\" or \"H\"");
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::vector<Check> invariance_suite(const RunConfig& cfg) {
  const json& v = cfg.verify;
  const FlowTrajectory traj = run_flow(build_initial(cfg.geometry), cfg.flow, cfg.monitors);
  const int n = traj.n;
  const bool analytic = traj.kind == Representation::AnalyticSphere;
  const double tol = number_or(v, "tolerance", analytic ? 1e-10 : 1e-3);
  const double t_center = number_or(v, "t_center", 0.5 * traj.steps.back().t);
  const Quantity q = quantity_or(v, Quantity::A);
  const double alpha = number_or(v, "alpha", n + 2.0);
  const double spatial_alpha = number_or(v, "spatial_alpha", n);
  const auto extra = list_or(v, "extra_alphas", {});

  std::vector<Check> checks;
  for (double Q : list_or(v, "Q", {0.5, 4.0, 100.0})) {
    const RescaleSpec spec{Q, t_center, std::nullopt};
    const auto add = [&](const std::string& name, double a, NormScope scope) {
      const InvarianceCheck c = spacetime_norm_invariance_check(traj, spec, q, a, scope);
      Check k{name + " Q=" + fmt(Q), c.deviation <= tol, c.deviation, tol, json::object()};
      k.extra = {{"original", encode(c.original)}, {"rescaled", encode(c.rescaled)},
                 {"predicted_ratio", encode(c.predicted_ratio)}};
      checks.push_back(std::move(k));
    };
    add("space-time alpha=" + fmt(alpha), alpha, NormScope::SpaceTime);
    add("spatial alpha=" + fmt(spatial_alpha), spatial_alpha, NormScope::Spatial);
    for (double a : extra) add("space-time scaling alpha=" + fmt(a), a, NormScope::SpaceTime);
    const double law = transformation_law_deviation(traj, parabolic_rescale(traj, spec), Q);
    checks.push_back({"transformation laws Q=" + fmt(Q), law <= tol, law, tol, json::object()});
  }
  return checks;
}

std::vector<Check> moser_suite(const RunConfig& cfg) {
  const json& v = cfg.verify;
  const int n = static_cast<int>(number_or(v, "n", cfg.geometry.n));
  FlowConfig flow = cfg.flow;
  std::vector<Check> checks;
  for (double r0 : list_or(v, "r0", {1.0, 2.0, 10.0})) {
    const double T = SphereSolution(n, r0).extinction_time();
    for (double frac : list_or(v, "T0_fraction", {0.3, 0.5, 0.8})) {
      flow.t_cap = frac * T;
      const FlowTrajectory traj = run_flow(AnalyticSphere(r0, n), flow, cfg.monitors);
      const MoserReport r = verify_moser_bound(traj);
      Check k{"r0=" + fmt(r0) + " T0=" + fmt(frac) + "T", !r.falsified, r.margin, 0.0, json::object()};
      k.extra = {{"lhs", encode(r.lhs)}, {"rhs", encode(r.rhs)}, {"C2", encode(r.constants.C2)},
                 {"integral", encode(r.spacetime_integral)}};
      checks.push_back(std::move(k));
    }
  }
  return checks;
}

std::vector<Check> dichotomy_suite(RunConfig cfg) {
  const json& v = cfg.verify;
  const Quantity q = quantity_or(v, Quantity::H);
  const double tol = number_or(v, "tolerance", 0.05);
  const auto alphas = list_or(v, "alphas", {static_cast<double>(cfg.geometry.n) + 2.0});
  for (double a : alphas) cfg.monitors.norms.push_back({q, a});
  DichotomyOptions opts;
  opts.exponent_tolerance = tol;

  const FlowTrajectory traj = run_flow(build_initial(cfg.geometry), cfg.flow, cfg.monitors);
  const int n = traj.n;
  std::vector<Check> checks;
  for (double a : alphas) {
    const NormKey key{q, a};
    const double expected = 0.5 * (n - a);
    const Growth expected_growth = a < n + 2.0 - 1e-12   ? Growth::Finite
                                   : a > n + 2.0 + 1e-12 ? Growth::PowerDivergent
                                                         : Growth::Logarithmic;
    try {
      const DichotomyFit fit = dichotomy_fit(traj, key, opts);
      const double gap = std::abs(fit.rate_exponent - expected);
      Check k{key.label() + " exponent", gap <= tol && fit.growth == expected_growth, fit.rate_exponent, tol,
              json::object()};
      k.extra = {{"expected_exponent", expected},
                 {"growth", to_string(fit.growth)},
                 {"expected_growth", to_string(expected_growth)},
                 {"divergence_exponent", encode(fit.divergence_exponent)},
                 {"finite_estimate", encode(fit.finite_estimate)},
                 {"t_est", fit.t_est},
                 {"samples", fit.samples}};
      checks.push_back(std::move(k));
      if (v.contains("oracle_tolerance") && fit.growth == Growth::Finite && cfg.geometry.params.contains("r0") &&
          (cfg.geometry.kind == "circle" || cfg.geometry.kind == "sphere")) {
        const double r0 = cfg.geometry.params.at("r0");
        const double oracle = sphere_spacetime_norm(n, r0, a, SphereSolution(n, r0).extinction_time());
        const double rel = std::abs(fit.finite_estimate - oracle) / oracle;
        const double otol = number_or(v, "oracle_tolerance", 0.01);
        checks.push_back({key.label() + " limit vs oracle", rel <= otol, rel, otol, {{"oracle", oracle}}});
      }
    } catch (const Error& e) {
      if (e.code() != Errc::InsufficientSamples) throw;
      checks.push_back({key.label() + " exponent", false, std::nan(""), tol, {{"error", e.what()}}});
    }
  }
  return checks;
}

std::vector<Check> evolution_suite(const RunConfig& cfg) {
  const json& v = cfg.verify;
  const double min_order = number_or(v, "min_order", 1.5);
  const auto resolutions = list_or(v, "resolutions", {256.0, 512.0});
  FlowConfig flow = cfg.flow;
  flow.record_stride = 1;
  flow.max_frames = 0;
  const double t_eval = number_or(v, "t_eval", 0.5 * flow.t_cap);
  const std::vector<Equation> equations{Equation::Metric, Equation::Normal, Equation::SecondFundamentalForm,
                                        Equation::MeanCurvature, Equation::NormSquared};

  std::vector<std::vector<double>> residuals;
  for (double m : resolutions) {
    GeometrySpec g = cfg.geometry;
    g.m = static_cast<std::size_t>(m);
    const FlowTrajectory traj = run_flow(build_initial(g), flow, cfg.monitors);
    if (traj.frames.size() < 3) throw Error(Errc::InvalidConfig, "flow too short for residuals; raise flow.t_cap");
    const std::size_t k = std::clamp<std::size_t>(traj.nearest_frame(t_eval), 1, traj.frames.size() - 2);
    std::vector<double> row;
    for (Equation eq : equations) row.push_back(evolution_residual(traj, k, eq).max_abs());
    residuals.push_back(std::move(row));
  }

  std::vector<Check> checks;
  for (std::size_t e = 0; e < equations.size(); ++e) {
    const std::string name(to_string(equations[e]));
    for (std::size_t i = 0; i + 1 < resolutions.size(); ++i) {
      const double order =
          std::log(residuals[i][e] / residuals[i + 1][e]) / std::log(resolutions[i + 1] / resolutions[i]);
      Check k{name + " order m=" + fmt(resolutions[i]) + "->" + fmt(resolutions[i + 1]), order >= min_order, order,
              min_order, {{"coarse", encode(residuals[i][e])}, {"fine", encode(residuals[i + 1][e])}}};
      checks.push_back(std::move(k));
    }
    if (v.contains("max_residual") && v.at("max_residual").contains(name)) {
      const double cap = v.at("max_residual").at(name).get<double>();
      const double r = residuals.back()[e];
      checks.push_back({name + " residual m=" + fmt(resolutions.back()), r <= cap, r, cap, json::object()});
    }
  }
  return checks;
}

}  // namespace

int cmd_verify(const std::string& suite, const std::filesystem::path& config_path, std::ostream& out,
               std::ostream& err) {
  RunConfig cfg;
  std::vector<Check> checks;
  try {
    if (suite != "evolution" && suite != "invariance" && suite != "moser" && suite != "dichotomy") {
      throw Error(Errc::InvalidConfig, "unknown suite \"" + suite + "\"");
    }
    cfg = load_config(config_path);
    if (suite == "invariance") checks = invariance_suite(cfg);
    if (suite == "moser") checks = moser_suite(cfg);
    if (suite == "dichotomy") checks = dichotomy_suite(cfg);
    if (suite == "evolution") checks = evolution_suite(cfg);
  } catch (const Error& e) {
    const bool config = e.code() == Errc::InvalidConfig || e.code() == Errc::BadShapeParameters ||
                        e.code() == Errc::WindowOutOfRange || e.code() == Errc::DimensionTooSmall ||
                        e.code() == Errc::NonPositiveInputs;
    err << (config ? "config error: " : "verify failed: ") << e.what() << '\n';
    return config ? kExitConfig : kExitFailure;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  bool all = !checks.empty();
  json list = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    json j{{"name", c.name}, {"pass", c.pass}, {"measured", encode(c.measured)}, {"threshold", encode(c.threshold)}};
    j.update(c.extra);
    list.push_back(j);
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << c.measured << " threshold=" << c.threshold << '\n';
  }
  const json report{{"suite", suite}, {"config", cfg.raw}, {"checks", list}, {"all_pass", all}};
  try {
    write_text(resolve_output_dir(cfg) / "report.json", report.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "cannot write report: " << e.what() << '\n';
    return kExitFailure;
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace mcflab::cli
