#include "mcflab/cli/config.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>

#include "mcflab/error.hpp"
#include "mcflab/oracles.hpp"

namespace mcflab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

const json& require(const json& node, const char* key, const std::string& where) {
  if (!node.is_object() || !node.contains(key)) bad("missing " + where + "." + key);
  return node.at(key);
}

double number(const json& node, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  if (!node.is_object() || !node.contains(key) || node.at(key).is_null()) {
    if (fallback) return *fallback;
    bad("missing " + where + "." + key);
  }
  const json& v = node.at(key);
  if (!v.is_number()) bad(where + "." + key + " must be a number");
  return v.get<double>();
}

std::size_t count(const json& node, const char* key, const std::string& where, std::optional<std::size_t> fallback = {}) {
  if (!node.is_object() || !node.contains(key) || node.at(key).is_null()) {
    if (fallback) return *fallback;
    bad("missing " + where + "." + key);
  }
  const json& v = node.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) bad(where + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

double param(const GeometrySpec& g, const char* name) {
  const auto it = g.params.find(name);
  if (it == g.params.end()) bad("geometry.params." + std::string(name) + " is required for " + g.kind);
  return it->second;
}

Quantity parse_quantity(const json& v) {
  if (!v.is_string()) bad("monitors.quantities entries must be \"A\" or \"H\"");
  const auto s = v.get<std::string>();
  if (s == "A") return Quantity::A;
  if (s == "H") return Quantity::H;
  bad("unknown quantity \"" + s + "\"");
}

}  // namespace

GeometrySpec parse_geometry(const json& node) {
  if (!node.is_object()) bad("geometry must be an object");
  GeometrySpec g;
  const json& kind = require(node, "kind", "geometry");
  if (!kind.is_string()) bad("geometry.kind must be a string");
  g.kind = kind.get<std::string>();
  if (node.contains("params")) {
    const json& p = node.at("params");
    if (!p.is_object()) bad("geometry.params must be an object");
    for (const auto& [key, value] : p.items()) {
      if (!value.is_number()) bad("geometry.params." + key + " must be a number");
      g.params[key] = value.get<double>();
    }
  }
  const bool curve = g.kind == "circle" || g.kind == "ellipse";
  if (g.kind != "sphere") g.m = count(node, "m", "geometry");
  if (node.contains("n")) {
    if (!node.at("n").is_number_integer()) bad("geometry.n must be an integer");
    g.n = node.at("n").get<int>();
  } else if (!curve) {
    bad("missing geometry.n");
  }
  if (curve && g.n != 1) bad("plane curves have n = 1");
  return g;
}

FlowConfig parse_flow(const json& node) {
  FlowConfig f;
  if (node.is_null()) return f;
  if (!node.is_object()) bad("flow must be an object");
  f.t_cap = number(node, "t_cap", "flow", f.t_cap);
  f.c_stab = number(node, "c_stab", "flow", f.c_stab);
  f.blowup_threshold = number(node, "blowup_threshold", "flow", f.blowup_threshold);
  f.dt_floor = number(node, "dt_floor", "flow", f.dt_floor);
  f.record_stride = count(node, "record_stride", "flow", f.record_stride);
  f.max_frames = count(node, "max_frames", "flow", f.max_frames);
  if (node.contains("redistribute")) {
    if (!node.at("redistribute").is_boolean()) bad("flow.redistribute must be a boolean");
    f.redistribute = node.at("redistribute").get<bool>();
  }
  f.validate();
  return f;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) bad("config must be a JSON object");
  RunConfig cfg;
  cfg.raw = doc;
  cfg.geometry = parse_geometry(require(doc, "geometry", "config"));
  cfg.flow = parse_flow(doc.value("flow", json()));

  const json monitors = doc.value("monitors", json::object());
  if (!monitors.is_object()) bad("monitors must be an object");
  std::vector<Quantity> quantities{Quantity::A, Quantity::H};
  if (monitors.contains("quantities")) {
    const json& q = monitors.at("quantities");
    if (!q.is_array()) bad("monitors.quantities must be a list");
    quantities.clear();
    for (const auto& v : q) quantities.push_back(parse_quantity(v));
  }
  if (monitors.contains("alphas")) {
    const json& a = monitors.at("alphas");
    if (!a.is_array()) bad("monitors.alphas must be a list");
    for (const auto& v : a) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) bad("monitors.alphas entries must be positive numbers");
      cfg.alphas.push_back(v.get<double>());
    }
  }
  for (double alpha : cfg.alphas) {
    for (Quantity q : quantities) cfg.monitors.norms.push_back({q, alpha});
  }
  if (monitors.contains("C_bound") && !monitors.at("C_bound").is_null()) {
    cfg.monitors.c_bound = number(monitors, "C_bound", "monitors");
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    if (!out.is_object() || !out.contains("dir") || !out.at("dir").is_string()) bad("output.dir must be a string");
    cfg.output_dir = out.at("dir").get<std::string>();
  }
  cfg.verify = doc.value("verify", json::object());
  // Surface shape errors now rather than mid-run.
  (void)build_initial(cfg.geometry);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    bad("malformed JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

Immersion build_initial(const GeometrySpec& g) {
  try {
    if (g.kind == "circle") return make_initial(CircleShape{param(g, "r0"), g.m});
    if (g.kind == "ellipse") return make_initial(EllipseShape{param(g, "a"), param(g, "b"), g.m});
    if (g.kind == "sphere_profile") return make_initial(SphereProfileShape{param(g, "r0"), g.m, g.n});
    if (g.kind == "spheroid") return make_initial(SpheroidShape{param(g, "axial"), param(g, "radial"), g.m, g.n});
    if (g.kind == "dumbbell") return make_initial(DumbbellShape{param(g, "neck"), param(g, "bulb"), g.m, g.n});
    if (g.kind == "sphere") {
      const double r0 = param(g, "r0");
      if (!(r0 > 0.0) || g.n < 1) bad("sphere needs r0 > 0 and n >= 1");
      return AnalyticSphere(r0, g.n);
    }
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidConfig) throw;
    bad(std::string("geometry: ") + e.what());
  }
  bad("unknown geometry.kind \"" + g.kind + "\"");
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("MCFLAB_OUT"); env && *env) return env;
  return cfg.output_dir;
}

}  // namespace mcflab::cli
