#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gflow_cli/commands.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::map<std::string, std::string> settings;
};

void add_common_flags(CLI::App& app, Flags& flags) {
  app.add_option_function<std::string>(
      "--config", [&flags](const std::string& v) { flags.config = v; },
      "key = value configuration file with optional [space] sections");
  const std::pair<const char*, const char*> options[] = {
      {"--space", "sphere | hilbert-rd | wasserstein-icdf | halfline"},
      {"--scheme", "mm | bdf2 | both"},
      {"--tau", "step size or comma separated list, descending"},
      {"--tau-ref", "reference step size"},
      {"--tau-coarse", "coarse grid spacing for error measurement"},
      {"--t-final", "time horizon T"},
      {"--grid-k", "grid size K for hilbert-rd and wasserstein-icdf"},
      {"--out", "output directory (default $GFLOW_OUT or ./gflow_out)"},
      {"--seed", "seed for EVI witnesses"},
      {"--jobs", "number of trajectories computed concurrently"},
  };
  for (const auto& [name, help] : options) {
    const std::string key = std::string(name).substr(2);
    app.add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags.settings[key] = v; },
        help);
  }
}

gflow::cli::ExperimentConfig build_config(const Flags& flags) {
  using namespace gflow::cli;
  ConfigSections sections;
  if (flags.config) sections = read_config_file(*flags.config);

  std::string space = "sphere";
  if (auto it = sections[""].find("space"); it != sections[""].end()) {
    space = it->second;
  }
  if (auto it = flags.settings.find("space"); it != flags.settings.end()) {
    space = it->second;
  }
  ExperimentConfig cfg = default_config(space);
  if (const char* env = std::getenv("GFLOW_OUT"); env && *env) cfg.out = env;
  apply_config(cfg, sections);
  for (const auto& [key, value] : flags.settings) apply_setting(cfg, key, value);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gflow::cli;
  CLI::App app{"Variational BDF2 and implicit Euler schemes for metric gradient flows"};
  app.require_subcommand(1);

  Flags run_flags;
  Flags converge_flags;
  Flags check_flags;
  CLI::App* run = app.add_subcommand("run", "compute trajectories and write them as CSV");
  CLI::App* converge = app.add_subcommand(
      "converge", "convergence study against a reference solution");
  CLI::App* check = app.add_subcommand("check", "verify the discrete stability inequalities");
  add_common_flags(*run, run_flags);
  add_common_flags(*converge, converge_flags);
  add_common_flags(*check, check_flags);
  check->add_option_function<std::string>(
      "--trajectory",
      [&check_flags](const std::string& v) { check_flags.settings["trajectory"] = v; },
      "check a trajectory CSV written by 'run' instead of computing one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const Flags& flags = run->parsed() ? run_flags
                       : converge->parsed() ? converge_flags
                                            : check_flags;
  ExperimentConfig cfg;
  try {
    cfg = build_config(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(cfg, std::cout, std::cerr);
    if (converge->parsed()) return cmd_converge(cfg, std::cout, std::cerr);
    return cmd_check(cfg, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == gflow::ErrorCode::kInvalidArgument ? kExitConfig : kExitSolver;
  }
}
