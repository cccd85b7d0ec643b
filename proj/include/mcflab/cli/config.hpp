#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mcflab/flow.hpp"

namespace mcflab::cli {

struct GeometrySpec {
  std::string kind;
  std::map<std::string, double> params;
  std::size_t m = 0;
  int n = 1;
};

struct RunConfig {
  GeometrySpec geometry;
  FlowConfig flow;
  MonitorSet monitors;
  std::vector<double> alphas;
  std::filesystem::path output_dir = "mcflab_out";
  /// Suite-specific block, empty when absent.
  nlohmann::json verify;
  /// The document as read, echoed into the manifest.
  nlohmann::json raw;
};

/// Throws Error(InvalidConfig) on missing or ill-typed keys.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

GeometrySpec parse_geometry(const nlohmann::json& node);
FlowConfig parse_flow(const nlohmann::json& node);

/// Initial immersion for the spec; analytic spheres are exact.
Immersion build_initial(const GeometrySpec& spec);

/// MCFLAB_OUT when set, else the configured directory.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

}  // namespace mcflab::cli
