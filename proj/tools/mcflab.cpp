#include <iostream>

#include <CLI11.hpp>

#include "mcflab/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mean curvature flow laboratory"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run a flow and write CSV, JSON and SVG artifacts");
  run->add_option("config", run_config, "Config JSON")->required();

  std::string suite, verify_config;
  auto* verify = app.add_subcommand("verify", "Run a named check grid");
  verify->add_option("suite", suite, "evolution | invariance | moser | dichotomy")
      ->required()
      ->check(CLI::IsMember({"evolution", "invariance", "moser", "dichotomy"}));
  verify->add_option("config", verify_config, "Config JSON")->required();

  mcflab::cli::OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Closed-form shrinking-sphere values");
  oracle->add_option("--n", oracle_args.n, "Dimension")->required();
  oracle->add_option("--r0", oracle_args.r0, "Initial radius")->capture_default_str();
  oracle->add_option("--alpha", oracle_args.alpha, "Norm exponent")->capture_default_str();
  oracle->add_option("--t-end", oracle_args.t_end, "End time")->required();
  oracle->add_flag("--json", oracle_args.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mcflab::cli::kExitConfig;
  }

  if (*run) return mcflab::cli::cmd_run(run_config, std::cout, std::cerr);
  if (*verify) return mcflab::cli::cmd_verify(suite, verify_config, std::cout, std::cerr);
  return mcflab::cli::cmd_oracle(oracle_args, std::cout, std::cerr);
}
