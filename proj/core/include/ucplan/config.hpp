#pragma once

#include <string>
#include <vector>

#include "ucplan/harness.hpp"

namespace ucplan {

/// Parses a robot description file (JSON mirroring the DH table layout:
/// per-joint kind / theta_offset_deg / d / a / alpha_deg, plus task kind
/// and a base unit tag). See configs/robots/ for the shipped schema.
RobotModel load_robot_file(const std::string& path);

/// Parses one experiment config (JSON). "robot" is a preset name or
/// {"file": ...}; every tunable constant (path geometry, gains, limits,
/// initial configuration, seeds) lives here.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& source_name);

/// Loads a matrix of configs: a directory of *.json files (sorted by name)
/// or a single file holding either one config, a JSON array of configs, or
/// {"runs": [...]}.
std::vector<ExperimentConfig> load_config_matrix(const std::string& path);

}  // namespace ucplan
