#include <chrono>
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

std::vector<Series> radius_series(const FlowTrajectory& traj, const GeometrySpec& geometry) {
  // Radius of the round sphere with the same area.
  const double sphere_area = unit_sphere_area(traj.n);
  Series area_radius{"area radius", {}, {}};
  for (const auto& r : traj.steps) {
    area_radius.x.push_back(r.t);
    area_radius.y.push_back(std::pow(r.area / sphere_area, 1.0 / traj.n));
  }
  std::vector<Series> out{std::move(area_radius)};
  if (geometry.kind == "circle" || geometry.kind == "sphere" || geometry.kind == "sphere_profile") {
    const SphereSolution exact(traj.n, geometry.params.at("r0"));
    Series s{"exact", {}, {}};
    for (const auto& r : traj.steps) {
      if (r.t > exact.extinction_time()) break;
      s.x.push_back(r.t);
      s.y.push_back(exact.radius(r.t));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Series> accumulator_series(const FlowTrajectory& traj) {
  std::vector<Series> out;
  for (std::size_t i = 0; i < traj.norms.size(); ++i) {
    Series s{traj.norms[i].label(), {}, {}};
    for (const auto& r : traj.steps) {
      s.x.push_back(r.t);
      s.y.push_back(r.acc[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  FlowTrajectory traj;
  try {
    traj = run_flow(build_initial(cfg.geometry), cfg.flow, cfg.monitors);
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidConfig) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
    err << "run failed: " << e.what() << '\n';
    return kExitFailure;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const auto dir = resolve_output_dir(cfg);
  try {
    std::ostringstream csv;
    write_steps_csv(traj, csv);
    write_text(dir / "steps.csv", csv.str());
    write_text(dir / "plots" / "radius.svg",
               svg_chart("Area radius against time", "t", "radius", radius_series(traj, cfg.geometry), false));
    write_text(dir / "plots" / "accumulators.svg",
               svg_chart("Space-time accumulators", "t", "accumulated integral", accumulator_series(traj), true));

    const ExtensionReport ext = extension_report(traj, cfg.alphas);
    json report;
    report["stop_reason"] = to_string(*traj.stop_reason);
    report["steps"] = traj.steps.size();
    report["final"] = to_json(traj.steps.back(), traj.norms);
    report["violations"] = traj.violations;
    report["monitors"] = to_json(traj.report);
    report["extension"] = to_json(ext);
    if (traj.exact_T) report["exact_T"] = *traj.exact_T;
    write_text(dir / "report.json", report.dump(2) + "\n");

    json manifest;
    manifest["tool"] = "mcflab";
    manifest["version"] = kToolVersion;
    manifest["config"] = cfg.raw;
    manifest["config_path"] = config_path.string();
    manifest["output_dir"] = dir.string();
    manifest["artifacts"] = {"steps.csv", "report.json", "plots/radius.svg", "plots/accumulators.svg"};
    manifest["stop_reason"] = to_string(*traj.stop_reason);
    manifest["wall_clock_seconds"] = seconds;
    manifest["sha256"] = {{"steps.csv", sha256_file(dir / "steps.csv")}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "cannot write artifacts: " << e.what() << '\n';
    return kExitFailure;
  }

  out << "stop_reason=" << to_string(*traj.stop_reason) << " steps=" << traj.steps.size()
      << " t=" << traj.steps.back().t << " output=" << dir.string() << '\n';
  if (!traj.violations.empty()) {
    for (const auto& v : traj.violations) err << "invariant violated: " << v << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace mcflab::cli
