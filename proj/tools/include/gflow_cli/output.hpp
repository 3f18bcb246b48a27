#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gflow/flow.hpp"

namespace gflow::cli {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Writes content to path.tmp-<unique> and renames it over path, so readers
// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Header "k,t,state_0,...,state_{n-1},energy,step_distance", one row per
// state u^0..u^N. step_distance is d(u^{k-1}, u^k) and 0 for k = 0.
std::string trajectory_csv(const FlowModel& model, const Trajectory& traj);

// Parses a file written by trajectory_csv. The step size is recovered from
// the time column; energies and distances are ignored and recomputed by the
// caller. Throws std::runtime_error on malformed input.
Trajectory read_trajectory_csv(const std::filesystem::path& path, Scheme scheme);

std::string trajectory_file_name(const std::string& space, Scheme scheme,
                                 double tau);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Log-log line chart with decade grid lines, axis labels and a legend.
std::string loglog_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<ChartSeries>& series);

}  // namespace gflow::cli
