#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gflow/flow.hpp"

namespace gflow::cli {

// Invalid experiment configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { kRun, kConverge, kCheck };

struct ExperimentConfig {
  std::string space = "sphere";
  std::vector<Scheme> schemes{Scheme::kMinimizingMovement, Scheme::kBdf2};
  double tau_ref = 1e-5;
  std::vector<double> taus;  // descending
  double tau_coarse = 0.0;
  double t_final = 0.0;
  int grid_k = 0;
  std::filesystem::path out = "gflow_out";
  std::uint64_t seed = 42;
  int jobs = 1;
  // Trajectory CSV to check instead of running one.
  std::optional<std::filesystem::path> trajectory_file;
};

inline const std::vector<std::string>& space_ids() {
  static const std::vector<std::string> ids{"sphere", "hilbert-rd",
                                            "wasserstein-icdf", "halfline"};
  return ids;
}

// Experiment defaults for a space id (the scaled-down reproduction runs).
ExperimentConfig default_config(const std::string& space);

// key = value lines; '#' starts a comment; "[space-id]" opens a section whose
// keys only apply when that space is selected.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;
ConfigSections parse_config_text(const std::string& text);
ConfigSections read_config_file(const std::filesystem::path& path);

// Applies the top-level keys and the section of cfg.space.
void apply_config(ExperimentConfig& cfg, const ConfigSections& sections);

// Applies one key (file key or flag name without dashes, '-' or '_').
void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value);

// Throws ConfigError when the configuration cannot be run for command.
void validate(const ExperimentConfig& cfg, Command command);

std::unique_ptr<FlowModel> make_model(const ExperimentConfig& cfg);

std::vector<double> parse_double_list(const std::string& text);
std::vector<Scheme> parse_scheme_list(const std::string& text);

}  // namespace gflow::cli
