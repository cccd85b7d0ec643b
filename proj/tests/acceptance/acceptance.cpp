// One PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mcflab/analysis.hpp"
#include "mcflab/cli/commands.hpp"
#include "mcflab/oracles.hpp"

namespace fs = std::filesystem;
using namespace mcflab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double relative(double got, double want) { return std::abs(got - want) / std::abs(want); }

double accumulated(const FlowTrajectory& traj, NormKey key) {
  return traj.steps.back().acc[*traj.norm_index(key)];
}

FlowTrajectory sphere_to_blowup(int n, double c_stab, std::vector<NormKey> norms) {
  FlowConfig cfg;
  cfg.t_cap = 10.0;
  cfg.c_stab = c_stab;
  return run_flow(AnalyticSphere(1.0, n), cfg, {std::move(norms), {}});
}

FlowTrajectory circle_512() {
  FlowConfig cfg;
  cfg.t_cap = 0.45;
  cfg.record_stride = 50;
  return run_flow(make_initial(CircleShape{1.0, 512}), cfg, {{{Quantity::A, 3.0}, {Quantity::A, 1.0}}, {}});
}

Outcome circle_reproduction() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto traj = circle_512();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double worst = 0.0;
  for (const auto& s : traj.frames) {
    const auto& pts = std::get<PlaneCurve>(s.immersion).points();
    double r = 0.0;
    for (const auto& p : pts) r += norm(p);
    r /= pts.size();
    worst = std::max(worst, relative(r, std::sqrt(1.0 - 2.0 * s.frame.t)));
  }
  o.require(traj.stop_reason == StopReason::ReachedTCap, "did not reach t = 0.45");
  o.require(std::abs(traj.frames.back().frame.t - 0.45) <= 1e-12, "last frame is not at t = 0.45");
  o.require(worst <= 1e-3, "radius error too large");
  o.require(seconds < 5.0, "too slow");
  o.detail = fmt("max rel radius error %.2e, %.2f s", worst, seconds) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome dichotomy_finite() {
  Outcome o;
  FlowConfig cfg;
  cfg.t_cap = 1.0;
  cfg.record_stride = 1000;
  const NormKey h2{Quantity::H, 2.0};
  const auto circle = run_flow(make_initial(CircleShape{1.0, 128}), cfg, {{h2}, {}});
  const auto fit = dichotomy_fit(circle, h2);
  const double circle_err = relative(fit.finite_estimate, 2.0 * kPi);
  o.require(circle.stop_reason == StopReason::CurvatureBlowup, "circle did not blow up");
  o.require(fit.growth == Growth::Finite, "circle alpha=2 not classified finite");
  o.require(circle_err <= 1e-2, "circle extrapolation off");

  const auto sphere = sphere_to_blowup(2, 0.01, {h2});
  const double sphere_err = std::abs(accumulated(sphere, h2) - 4.0 * kPi);
  o.require(sphere_err <= 1e-6, "sphere accumulation off");
  o.detail = fmt("circle rel err %.2e, sphere abs err %.2e", circle_err, sphere_err) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome dichotomy_infinite() {
  Outcome o;
  double worst_crit = 0.0, worst_super = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const NormKey super{Quantity::H, n + 3.0};
    const auto traj = sphere_to_blowup(n, 0.1, {super});
    for (Quantity q : {Quantity::A, Quantity::H}) {
      const auto fit = dichotomy_fit(traj, {q, n + 2.0});
      worst_crit = std::max(worst_crit, std::abs(fit.rate_exponent + 1.0));
      o.require(fit.growth == Growth::Logarithmic, "critical pair not logarithmic at n=" + std::to_string(n));
    }
    const auto fit = dichotomy_fit(traj, super);
    worst_super = std::max(worst_super, std::abs(fit.divergence_exponent - 0.5));
    o.require(fit.growth == Growth::PowerDivergent, "alpha=n+3 not power divergent at n=" + std::to_string(n));
  }
  FlowConfig cfg;
  cfg.t_cap = 1.0;
  cfg.record_stride = 1000;
  const auto circle = run_flow(make_initial(CircleShape{1.0, 128}), cfg);
  const auto numeric = dichotomy_fit(circle, {Quantity::H, 3.0});
  worst_crit = std::max(worst_crit, std::abs(numeric.rate_exponent + 1.0));
  o.require(numeric.growth == Growth::Logarithmic, "numeric circle alpha=3 not logarithmic");
  o.require(worst_crit <= 0.05, "critical exponent off");
  o.require(worst_super <= 0.05, "divergence exponent off");
  o.detail = fmt("max |exp + 1| %.2e, max |div exp - 0.5| %.2e", worst_crit, worst_super) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome umbilic_ratio() {
  Outcome o;
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<NormKey> keys;
    for (double a : {1.0 * n, n + 1.0, n + 2.0}) {
      keys.push_back({Quantity::A, a});
      keys.push_back({Quantity::H, a});
    }
    FlowConfig cfg;
    cfg.t_cap = 0.9 / (2.0 * n);
    const auto traj = run_flow(AnalyticSphere(1.0, n), cfg, {keys, {}});
    for (double a : {1.0 * n, n + 1.0, n + 2.0}) {
      const double want = std::pow(n, -0.5 * a) * accumulated(traj, {Quantity::H, a});
      worst = std::max(worst, relative(accumulated(traj, {Quantity::A, a}), want));
    }
  }
  o.require(worst <= 1e-12, "ratio off");
  o.detail = fmt("max rel deviation %.2e", worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome rescaling_invariance() {
  Outcome o;
  double analytic = 0.0, scaling = 0.0, numeric = 0.0;
  for (int n = 1; n <= 3; ++n) {
    FlowConfig cfg;
    cfg.t_cap = 0.8 / (2.0 * n);
    const auto traj = run_flow(AnalyticSphere(1.0, n), cfg);
    for (double Q : {0.5, 4.0, 100.0}) {
      const RescaleSpec spec{Q, 0.2 / n, std::nullopt};
      analytic = std::max(analytic, spacetime_norm_invariance_check(traj, spec, Quantity::A, n + 2.0).deviation);
      analytic = std::max(
          analytic, spacetime_norm_invariance_check(traj, spec, Quantity::A, n, NormScope::Spatial).deviation);
      for (double a : {1.0 * n, n + 1.0, n + 3.0}) {
        scaling = std::max(scaling, spacetime_norm_invariance_check(traj, spec, Quantity::A, a).deviation);
        scaling = std::max(
            scaling, spacetime_norm_invariance_check(traj, spec, Quantity::H, a, NormScope::Spatial).deviation);
      }
    }
  }
  const auto circle = circle_512();
  for (double Q : {0.5, 4.0, 100.0}) {
    const RescaleSpec spec{Q, 0.2, std::nullopt};
    numeric = std::max(numeric, spacetime_norm_invariance_check(circle, spec, Quantity::A, 3.0).deviation);
    numeric =
        std::max(numeric, spacetime_norm_invariance_check(circle, spec, Quantity::A, 1.0, NormScope::Spatial).deviation);
  }
  o.require(analytic <= 1e-10, "analytic invariance off");
  o.require(scaling <= 1e-10, "non-invariant scaling off");
  o.require(numeric <= 1e-3, "numeric circle invariance off");
  o.detail = fmt("analytic %.2e, circle %.2e", analytic, numeric) + fmt(", scaling laws %.2e", scaling) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome evolution_residuals() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Equation> equations{Equation::Metric, Equation::Normal, Equation::SecondFundamentalForm,
                                        Equation::MeanCurvature, Equation::NormSquared};
  FlowConfig cfg;
  cfg.t_cap = 0.01;
  cfg.max_frames = 0;
  double min_order = std::numeric_limits<double>::infinity();
  for (double a : {1.5, 2.0}) {
    std::vector<double> coarse, fine;
    for (std::size_t m : {256, 512}) {
      const auto traj = run_flow(make_initial(EllipseShape{a, 1.0, m}), cfg);
      const std::size_t k = traj.nearest_frame(0.005);
      for (Equation eq : equations) (m == 256 ? coarse : fine).push_back(evolution_residual(traj, k, eq).max_abs());
    }
    for (std::size_t e = 0; e < equations.size(); ++e) {
      const double order = std::log2(coarse[e] / fine[e]);
      min_order = std::min(min_order, order);
      o.require(order >= 1.5, fmt("a/b=%.1f order too low", a) + " for " + std::string(to_string(equations[e])));
    }
  }
  const auto circle = run_flow(make_initial(CircleShape{1.0, 512}), cfg);
  const double h_res = evolution_residual(circle, circle.nearest_frame(0.005), Equation::MeanCurvature).max_abs();
  o.require(h_res <= 1e-3, "circle H residual too large");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds < 30.0, "too slow");
  o.detail = fmt("min order %.2f, circle H residual %.2e", min_order, h_res) + fmt(", %.2f s", seconds) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome pinching_monotonicity() {
  Outcome o;
  const std::vector<std::pair<std::string, Immersion>> shapes{
      {"circle", make_initial(CircleShape{1.0, 128})},
      {"ellipse 1.5", make_initial(EllipseShape{1.5, 1.0, 128})},
      {"ellipse 2", make_initial(EllipseShape{2.0, 1.0, 128})},
      {"spheroid", make_initial(SpheroidShape{1.5, 1.0, 128, 2})},
      {"sphere profile", make_initial(SphereProfileShape{1.0, 128, 3})}};
  double worst_gradient = -std::numeric_limits<double>::infinity();
  for (const auto& [name, imm] : shapes) {
    // Whole flow until |A|^2 is 1e4, i.e. curvature about 100 times its start.
    FlowConfig full;
    full.t_cap = 10.0;
    full.record_stride = 1000;
    full.blowup_threshold = 1e4;
    const auto whole = run_flow(imm, full);
    o.require(whole.stop_reason == StopReason::CurvatureBlowup, name + " stopped before |A|^2 = 1e4");
    o.require(whole.report.mean_convex_initially(), name + " not mean convex");
    o.require(whole.report.pinching_monotone(), name + " pinching increased");

    FlowConfig cfg;
    cfg.t_cap = 0.1;
    cfg.max_frames = 0;
    const auto traj = run_flow(imm, cfg);
    for (std::size_t k = 1; k + 1 < traj.frames.size(); k += std::max<std::size_t>(1, traj.frames.size() / 20)) {
      worst_gradient = std::max(worst_gradient, pinching_evolution_residual(traj, k).max_gradient_term());
    }
  }
  o.require(worst_gradient <= 1e-12, "gradient term positive");
  o.detail = fmt("max gradient term %.2e", worst_gradient) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome moser_bound() {
  Outcome o;
  double min_margin = std::numeric_limits<double>::infinity();
  for (double r0 : {1.0, 2.0, 10.0}) {
    const double T = SphereSolution(3, r0).extinction_time();
    for (double frac : {0.3, 0.5, 0.8}) {
      FlowConfig cfg;
      cfg.t_cap = frac * T;
      const auto r = verify_moser_bound(run_flow(AnalyticSphere(r0, 3), cfg));
      min_margin = std::min(min_margin, r.margin);
      o.require(r.margin >= 0.0, fmt("negative margin at r0=%g T0=%gT", r0, frac));
    }
  }
  // 2^3 * 4^{4/3} / (2 |B^4|) with |B^4| = pi^2 / 2.
  const double hand = 8.0 * std::cbrt(256.0) / (kPi * kPi);
  const double err = std::abs(sobolev_constant(3) - hand);
  o.require(err <= 1e-10, "Sobolev constant mismatch");
  o.detail = fmt("min margin %.3g, C(3) err %.1e", min_margin, err) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome neckpinch() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  FlowConfig cfg;
  cfg.t_cap = 1.0;
  cfg.c_stab = 0.05;
  cfg.record_stride = 50;
  const auto traj = run_flow(make_initial(DumbbellShape{0.2, 1.0, 512, 2}), cfg);
  const std::vector<double> alphas{4.0};
  const auto rep = extension_report(traj, alphas);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(traj.stop_reason == StopReason::CurvatureBlowup, "no curvature blow-up");
  const NormVerdict* a4 = nullptr;
  for (const auto& v : rep.norms)
    if (v.key == NormKey{Quantity::A, 4.0}) a4 = &v;
  o.require(a4 && a4->status == NormStatus::Diverging, "(A, 4) not diverging");
  o.require(a4 && a4->fit && a4->fit->rate_monotone_increasing, "(A, 4) rate not monotone");
  o.require(rep.consistent, "extension report inconsistent");
  o.require(seconds < 60.0, "too slow");
  o.detail = fmt("t_stop %.5f, %.2f s", traj.steps.back().t, seconds) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism_and_schema() {
  Outcome o;
  const fs::path root = fs::path(MCFLAB_ACCEPTANCE_SCRATCH);
  fs::remove_all(root);
  std::vector<std::string> csv;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << R"({"geometry": {"kind": "circle", "params": {"r0": 1.0}, "m": 256},
      "flow": {"t_cap": 0.2, "c_stab": 0.2, "record_stride": 10},
      "monitors": {"alphas": [2, 3], "quantities": ["A", "H"]},
      "output": {"dir": ")" + (dir / "out").string() + R"("}})";
    std::ostringstream out, err;
    o.require(cli::cmd_run(dir / "config.json", out, err) == cli::kExitOk, std::string("run ") + run + " failed");
    csv.push_back(slurp(dir / "out" / "steps.csv"));
  }
  o.require(!csv[0].empty() && csv[0] == csv[1], "steps.csv differs between runs");
  const std::string golden = slurp(fs::path(MCFLAB_ACCEPTANCE_DATA) / "golden_header.csv");
  o.require(csv[0].substr(0, csv[0].find('\n') + 1) == golden, "header differs from golden file");
  o.detail = fmt("%.0f bytes identical", static_cast<double>(csv[0].size())) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"shrinking circle", circle_reproduction},
      {"dichotomy finite side", dichotomy_finite},
      {"dichotomy infinite side", dichotomy_infinite},
      {"umbilical ratio", umbilic_ratio},
      {"rescaling invariance", rescaling_invariance},
      {"evolution residuals", evolution_residuals},
      {"pinching monotonicity", pinching_monotonicity},
      {"sup bound", moser_bound},
      {"neckpinch", neckpinch},
      {"determinism and schema", determinism_and_schema},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::printf("%s %2d %s: %s\n", r.pass ? "PASS" : "FAIL", index, name, r.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
