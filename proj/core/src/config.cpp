#include "ucplan/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ucplan {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kDegToRad = std::numbers::pi / 180.0;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

Vector to_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + " must be numeric");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

RobotModel parse_robot(const json& j, const std::string& source) {
  RobotModel robot;
  robot.name = j.value("name", source);
  const std::string task = j.value("task", "spatial_6");
  if (task == "planar_xy") {
    robot.task = TaskKind::PlanarXY;
  } else if (task == "spatial_6") {
    robot.task = TaskKind::Spatial6;
  } else {
    throw ConfigError(source + ": unknown task kind '" + task + "'");
  }
  if (!j.contains("joints") || !j["joints"].is_array() || j["joints"].empty()) {
    throw ConfigError(source + ": robot needs a non-empty joints array");
  }
  for (const json& row : j["joints"]) {
    DHRow dh;
    const std::string kind = row.value("kind", "");
    if (kind == "revolute") {
      dh.kind = JointKind::Revolute;
    } else if (kind == "prismatic") {
      dh.kind = JointKind::Prismatic;
    } else {
      throw ConfigError(source + ": joint kind must be revolute or prismatic");
    }
    dh.theta_offset = row.value("theta_offset_deg", 0.0) * kDegToRad;
    dh.d = row.value("d", 0.0);
    dh.a = row.value("a", 0.0);
    dh.alpha = row.value("alpha_deg", 0.0) * kDegToRad;
    robot.dh.joints.push_back(dh);
  }
  return robot;
}

ExperimentConfig parse_config_json(const json& j, const std::string& source,
                                   const fs::path& base_dir) {
  ExperimentConfig cfg;
  cfg.label = j.value("label", fs::path(source).stem().string());

  if (!j.contains("robot")) throw ConfigError(source + ": missing robot");
  const json& jr = j["robot"];
  if (jr.is_string()) {
    cfg.robot = presets::by_name(jr.get<std::string>());
  } else if (jr.is_object() && jr.contains("file")) {
    fs::path p = jr["file"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    cfg.robot = load_robot_file(p.string());
  } else if (jr.is_object()) {
    cfg.robot = parse_robot(jr, source);
  } else {
    throw ConfigError(source + ": robot must be a preset name, inline object, or {\"file\": ...}");
  }

  if (!j.contains("path")) throw ConfigError(source + ": missing path");
  const json& jp = j["path"];
  cfg.path.kind = path_kind_from_name(jp.value("kind", "circle"));
  cfg.path.scale = jp.value("scale", 0.2);
  cfg.path.total_time = jp.value("total_time", 10.0);
  cfg.path.period = jp.value("period", cfg.path.total_time);
  cfg.path.waypoints = jp.value("waypoints", 7000);
  cfg.path.petal_count = jp.value("petal_count", 3);
  cfg.path.z_amplitude = jp.value("z_amplitude", 0.0);
  if (jp.contains("center") && !jp["center"].is_string()) {
    const Vector c = to_vector(jp["center"], source + ": path.center");
    if (c.size() < 2 || c.size() > 3) {
      throw ConfigError(source + ": path.center must have 2 or 3 components");
    }
    cfg.path.center = Eigen::Vector3d::Zero();
    cfg.path.center.head(c.size()) = c;
    cfg.center_auto = false;
  } else {
    cfg.center_auto = true;  // "auto" or omitted
  }

  cfg.scheme = scheme_from_name(j.value("scheme", "mvn"));
  cfg.backend = backend_from_name(j.value("backend", "mx"));

  if (j.contains("units")) {
    cfg.unit_factors.clear();
    for (const json& u : j["units"]) {
      const double f = u.is_string() ? 0.0 : u.get<double>();
      if (u.is_string()) {
        const std::string s = u.get<std::string>();
        if (s == "m") cfg.unit_factors.push_back(1.0);
        else if (s == "dm") cfg.unit_factors.push_back(10.0);
        else if (s == "cm") cfg.unit_factors.push_back(100.0);
        else if (s == "mm") cfg.unit_factors.push_back(1000.0);
        else throw ConfigError(source + ": unknown unit '" + s + "'");
      } else {
        if (f != 1.0 && f != 10.0 && f != 100.0 && f != 1000.0) {
          throw ConfigError(source + ": unit factors must be in {1,10,100,1000}");
        }
        cfg.unit_factors.push_back(f);
      }
    }
    if (cfg.unit_factors.empty()) throw ConfigError(source + ": empty units list");
  }

  if (j.contains("noise")) {
    const json& jn = j["noise"];
    cfg.noise_kind = noise_kind_from_name(jn.value("kind", "zero"));
    cfg.noise_seed = jn.value("seed", 0ull);
    if (jn.contains("base")) {
      cfg.noise_base = to_vector(jn["base"], source + ": noise.base");
    }
  }

  if (j.contains("gains")) {
    const json& jg = j["gains"];
    cfg.gains.alpha = jg.value("alpha", cfg.gains.alpha);
    cfg.gains.beta = jg.value("beta", cfg.gains.beta);
    cfg.gains.k1 = jg.value("k1", cfg.gains.k1);
    cfg.gains.k2 = jg.value("k2", cfg.gains.k2);
    cfg.gains.fpbm_alpha_weight =
        jg.value("fpbm_alpha_weight", cfg.gains.fpbm_alpha_weight);
    if (jg.contains("weights")) {
      cfg.gains.weights = to_vector(jg["weights"], source + ": gains.weights");
    }
  }

  if (j.contains("limits")) {
    const json& jl = j["limits"];
    const auto read_limit = [&](const char* key) -> Vector {
      if (!jl.contains(key)) return Vector();
      if (jl[key].is_number()) {
        return Vector::Constant(cfg.robot.dof(), jl[key].get<double>());
      }
      return to_vector(jl[key], source + ": limits." + key);
    };
    cfg.limits.qdot_max = read_limit("qdot_max");
    cfg.limits.qddot_max = read_limit("qddot_max");
  }

  if (j.contains("initial_q")) {
    cfg.initial_q = to_vector(j["initial_q"], source + ": initial_q");
  } else {
    cfg.initial_q = Vector::Zero(cfg.robot.dof());
  }
  if (cfg.initial_q.size() != cfg.robot.dof()) {
    throw ConfigError(source + ": initial_q length does not match joint count");
  }

  cfg.output_dir = j.value("output_dir", "");
  return cfg;
}

}  // namespace

RobotModel load_robot_file(const std::string& path) {
  return parse_robot(load_json(path), path);
}

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& source_name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  return parse_config_json(j, source_name, fs::path());
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_config_json(load_json(path), path, fs::path(path).parent_path());
}

std::vector<ExperimentConfig> load_config_matrix(const std::string& path) {
  std::vector<ExperimentConfig> configs;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      configs.push_back(load_experiment_config(f.string()));
    }
    if (configs.empty()) {
      throw ConfigError(path + ": directory holds no .json configs");
    }
    return configs;
  }

  const json j = load_json(path);
  const fs::path base_dir = fs::path(path).parent_path();
  const auto parse_many = [&](const json& arr) {
    int i = 0;
    for (const json& item : arr) {
      configs.push_back(
          parse_config_json(item, path + "[" + std::to_string(i) + "]", base_dir));
      ++i;
    }
  };
  if (j.is_array()) {
    parse_many(j);
  } else if (j.is_object() && j.contains("runs")) {
    parse_many(j["runs"]);
  } else {
    configs.push_back(parse_config_json(j, path, base_dir));
  }
  if (configs.empty()) throw ConfigError(path + ": no runs defined");
  return configs;
}

}  // namespace ucplan
