#pragma once

#include <filesystem>
#include <ostream>
#include <string>

namespace mcflab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitFailure = 3;

inline constexpr const char* kToolVersion = "0.1.0";

int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// suite is one of evolution, invariance, moser, dichotomy.
int cmd_verify(const std::string& suite, const std::filesystem::path& config, std::ostream& out, std::ostream& err);

struct OracleArgs {
  int n = 1;
  double r0 = 1.0;
  double alpha = 2.0;
  double t_end = 0.0;
  bool json = false;
};

int cmd_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err);

}  // namespace mcflab::cli
