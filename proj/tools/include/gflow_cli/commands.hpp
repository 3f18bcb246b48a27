#pragma once

#include <iosfwd>

#include "gflow_cli/config.hpp"

namespace gflow::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

// Number of EVI witnesses per space.
inline constexpr std::size_t kWitnessCount = 16;

// Writes one trajectory CSV per (scheme, tau) into cfg.out.
int cmd_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

// Writes convergence.csv, convergence.svg, fits.csv and diagnostics.csv.
int cmd_converge(const ExperimentConfig& cfg, std::ostream& out,
                 std::ostream& err);

// Runs the inequality suite on one trajectory per scheme (the largest tau),
// or on cfg.trajectory_file, and prints the worst residual of every check.
int cmd_check(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace gflow::cli
