#include "gflow_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gflow/diagnostics.hpp"
#include "gflow/halfline.hpp"
#include "gflow/hilbert_rd.hpp"
#include "gflow/sphere.hpp"
#include "gflow/wasserstein_icdf.hpp"

namespace gflow::cli {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid number '" + text + "' for " + key);
  }
  return value;
}

template <typename Int>
Int parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid integer '" + text + "' for " + key);
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(item, "tau"));
  return out;
}

std::vector<Scheme> parse_scheme_list(const std::string& text) {
  std::vector<Scheme> out;
  for (const auto& item : split_list(text)) {
    if (item == "both" || item == "all") {
      out = {Scheme::kMinimizingMovement, Scheme::kBdf2};
      continue;
    }
    try {
      const Scheme s = parse_scheme(item);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    } catch (const Error&) {
      throw ConfigError("unknown scheme '" + item + "' (use mm, bdf2 or both)");
    }
  }
  if (out.empty()) throw ConfigError("empty scheme list");
  return out;
}

ExperimentConfig default_config(const std::string& space) {
  ExperimentConfig cfg;
  cfg.space = space;
  if (space == "sphere") {
    cfg.tau_ref = 1e-5;
    cfg.taus = {1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
    cfg.tau_coarse = 1.6e-3;
    cfg.t_final = 0.5;
  } else if (space == "hilbert-rd" || space == "wasserstein-icdf") {
    cfg.tau_ref = 2e-5;
    cfg.taus = {1.28e-3, 6.4e-4, 3.2e-4, 1.6e-4, 8e-5};
    cfg.tau_coarse = 1.28e-3;
    cfg.t_final = 0.05;
    cfg.grid_k = space == "hilbert-rd" ? 100 : 50;
  } else if (space == "halfline") {
    cfg.tau_ref = 1e-4;
    cfg.taus = {1e-2, 1e-3, 1e-4};
    cfg.tau_coarse = 1e-2;
    cfg.t_final = 2.0;
  } else {
    throw ConfigError("unknown space '" + space +
                      "' (sphere, hilbert-rd, wasserstein-icdf, halfline)");
  }
  return cfg;
}

ConfigSections parse_config_text(const std::string& text) {
  ConfigSections sections;
  sections[""];
  std::string current;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    sections[current][normalize_key(trim(line.substr(0, eq)))] =
        trim(line.substr(eq + 1));
  }
  return sections;
}

ConfigSections read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key,
                   const std::string& value) {
  const std::string key = normalize_key(raw_key);
  if (key == "space") {
    cfg.space = trim(value);
  } else if (key == "scheme") {
    cfg.schemes = parse_scheme_list(value);
  } else if (key == "tau") {
    cfg.taus = parse_double_list(value);
  } else if (key == "tau_ref") {
    cfg.tau_ref = parse_double(value, key);
  } else if (key == "tau_coarse") {
    cfg.tau_coarse = parse_double(value, key);
  } else if (key == "t_final") {
    cfg.t_final = parse_double(value, key);
  } else if (key == "grid_k") {
    cfg.grid_k = parse_int<int>(value, key);
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(value, key);
  } else if (key == "jobs") {
    cfg.jobs = parse_int<int>(value, key);
  } else if (key == "trajectory") {
    cfg.trajectory_file = std::filesystem::path(trim(value));
  } else {
    throw ConfigError("unknown configuration key '" + raw_key + "'");
  }
}

void apply_config(ExperimentConfig& cfg, const ConfigSections& sections) {
  if (const auto it = sections.find(""); it != sections.end()) {
    for (const auto& [key, value] : it->second) {
      if (key != "space") apply_setting(cfg, key, value);
    }
  }
  if (const auto it = sections.find(cfg.space); it != sections.end()) {
    for (const auto& [key, value] : it->second) apply_setting(cfg, key, value);
  }
}

void validate(const ExperimentConfig& cfg, Command command) {
  const auto& ids = space_ids();
  if (std::find(ids.begin(), ids.end(), cfg.space) == ids.end()) {
    throw ConfigError("unknown space '" + cfg.space + "'");
  }
  if (cfg.schemes.empty()) throw ConfigError("no scheme selected");
  if (cfg.jobs < 1) throw ConfigError("--jobs must be at least 1");
  if (cfg.space == "hilbert-rd" && cfg.grid_k < 2) {
    throw ConfigError("hilbert-rd needs grid_k >= 2");
  }
  if (cfg.space == "wasserstein-icdf" && cfg.grid_k < 4) {
    throw ConfigError("wasserstein-icdf needs grid_k >= 4");
  }
  if (command == Command::kCheck && cfg.trajectory_file) {
    if (cfg.schemes.size() != 1) {
      throw ConfigError("checking a trajectory file needs a single --scheme");
    }
    return;
  }
  if (cfg.taus.empty()) throw ConfigError("no step size given");
  for (double tau : cfg.taus) {
    if (!(tau > 0.0)) throw ConfigError("step sizes must be positive");
    if (!(cfg.t_final >= tau)) {
      std::ostringstream msg;
      msg << "t_final=" << cfg.t_final << " is shorter than tau=" << tau
          << " (no steps)";
      throw ConfigError(msg.str());
    }
  }
  if (!std::is_sorted(cfg.taus.begin(), cfg.taus.end(), std::greater<>())) {
    throw ConfigError("tau list must be sorted in descending order");
  }
  if (std::adjacent_find(cfg.taus.begin(), cfg.taus.end()) != cfg.taus.end()) {
    throw ConfigError("tau list contains duplicates");
  }
  if (command != Command::kConverge) return;

  if (cfg.taus.size() < 3) {
    throw ConfigError("convergence study needs at least 3 step sizes");
  }
  if (!(cfg.tau_ref > 0.0)) throw ConfigError("tau_ref must be positive");
  if (!(cfg.t_final >= cfg.tau_coarse)) {
    throw ConfigError("t_final must be at least tau_coarse");
  }
  for (double tau : cfg.taus) {
    if (!is_integer_multiple(tau, cfg.tau_ref)) {
      std::ostringstream msg;
      msg << "tau=" << tau << " is not an integer multiple of tau_ref="
          << cfg.tau_ref;
      throw ConfigError(msg.str());
    }
    if (!is_integer_multiple(cfg.tau_coarse, tau)) {
      std::ostringstream msg;
      msg << "tau_coarse=" << cfg.tau_coarse
          << " is not an integer multiple of tau=" << tau;
      throw ConfigError(msg.str());
    }
  }
}

std::unique_ptr<FlowModel> make_model(const ExperimentConfig& cfg) {
  if (cfg.space == "sphere") return std::make_unique<SphereModel>();
  if (cfg.space == "hilbert-rd") {
    return std::make_unique<HilbertRdModel>(cfg.grid_k);
  }
  if (cfg.space == "wasserstein-icdf") {
    return std::make_unique<WassersteinIcdfModel>(cfg.grid_k);
  }
  if (cfg.space == "halfline") {
    return std::make_unique<ScalarModel>(ScalarModel::Energy::kHalfLine);
  }
  throw ConfigError("unknown space '" + cfg.space + "'");
}

}  // namespace gflow::cli
