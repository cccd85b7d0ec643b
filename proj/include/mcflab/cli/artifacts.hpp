#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcflab/analysis.hpp"

namespace mcflab::cli {

/// step,t,dt,max_A2,max_H2,min_kappa,min_H,area then acc_<q>_<alpha> per norm.
std::string csv_header(const FlowTrajectory& traj);
void write_steps_csv(const FlowTrajectory& traj, std::ostream& out);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG 1.1 line chart; non-positive values are dropped when log_y.
std::string svg_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, bool log_y);

/// Lower-case hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

nlohmann::json to_json(const MonitorReport& report);
nlohmann::json to_json(const ExtensionReport& report);
nlohmann::json to_json(const StepRecord& record, const std::vector<NormKey>& norms);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mcflab::cli
