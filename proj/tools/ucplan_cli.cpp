// ucplan command-line harness: run single experiment cells or whole
// matrices, export path waypoints, and run the built-in invariant checks.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ucplan/config.hpp"
#include "ucplan/gi.hpp"
#include "ucplan/harness.hpp"
#include "ucplan/kinematics.hpp"
#include "ucplan/noise.hpp"
#include "ucplan/trajectories.hpp"

namespace fs = std::filesystem;
using namespace ucplan;

namespace {

struct CommonOverrides {
  std::string output_dir;
  std::string backend;
  std::string units;
  std::int64_t seed = -1;
  int jobs = 0;
};

std::vector<double> parse_units(const std::string& text) {
  std::vector<double> units;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "m" || tok == "1") units.push_back(1.0);
    else if (tok == "dm" || tok == "10") units.push_back(10.0);
    else if (tok == "cm" || tok == "100") units.push_back(100.0);
    else if (tok == "mm" || tok == "1000") units.push_back(1000.0);
    else throw ConfigError("unknown unit '" + tok + "' (use m,dm,cm,mm)");
  }
  if (units.empty()) throw ConfigError("empty unit list");
  return units;
}

void apply_overrides(std::vector<ExperimentConfig>& configs,
                     const CommonOverrides& ov) {
  for (ExperimentConfig& cfg : configs) {
    if (!ov.output_dir.empty()) cfg.output_dir = ov.output_dir;
    if (!ov.backend.empty()) cfg.backend = backend_from_name(ov.backend);
    if (!ov.units.empty()) cfg.unit_factors = parse_units(ov.units);
    if (ov.seed >= 0) cfg.noise_seed = static_cast<std::uint64_t>(ov.seed);
  }
}

void write_outputs(const MatrixResult& result, const std::string& out_dir) {
  if (!out_dir.empty()) fs::create_directories(out_dir);
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);

  for (const RunGroup& group : result.groups) {
    for (const ExperimentRecord& rec : group.records) {
      const std::string stem = record_stem(rec);
      std::ofstream csv(dir / (stem + ".csv"));
      write_run_csv(rec, csv);
      std::ofstream meta(dir / (stem + ".meta.json"));
      meta << rec.metadata_json << '\n';
    }
  }
  std::ofstream summary(dir / "summary.csv");
  write_summary_csv(result, summary);
  std::ofstream report(dir / "consistency_report.txt");
  write_consistency_report(result, report);
}

int finish(const MatrixResult& result, const std::string& out_dir) {
  write_outputs(result, out_dir);
  write_consistency_report(result, std::cout);
  for (const RunGroup& group : result.groups) {
    for (const ExperimentRecord& rec : group.records) {
      std::printf("%-40s mean=%.6g mm  max=%.6g mm  gi_calls=%ld  %.3f s%s\n",
                  record_stem(rec).c_str(), rec.mean_error_mm, rec.max_error_mm,
                  rec.gi_calls, rec.wall_seconds,
                  rec.diverged ? "  [diverged]" : "");
    }
  }
  if (result.any_divergence || !result.all_consistent) return 1;
  return 0;
}

int cmd_run(const std::string& config_path, const CommonOverrides& ov) {
  std::vector<ExperimentConfig> configs = {load_experiment_config(config_path)};
  apply_overrides(configs, ov);
  const std::string out_dir =
      !ov.output_dir.empty() ? ov.output_dir : configs.front().output_dir;
  const MatrixResult result = run_matrix(configs, ov.jobs);
  return finish(result, out_dir);
}

int cmd_matrix(const std::string& path, const CommonOverrides& ov) {
  std::vector<ExperimentConfig> configs = load_config_matrix(path);
  apply_overrides(configs, ov);
  const std::string out_dir =
      !ov.output_dir.empty() ? ov.output_dir : configs.front().output_dir;
  const MatrixResult result = run_matrix(configs, ov.jobs);
  return finish(result, out_dir);
}

int cmd_paths(const std::string& config_path, const std::string& out_file) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  PathSpec path = cfg.path;
  if (cfg.center_auto) {
    const Pose p0 = forward_kinematics(cfg.robot.dh, cfg.initial_q);
    Eigen::Vector3d start = p0.position;
    if (cfg.robot.task == TaskKind::PlanarXY) start.z() = 0.0;
    path.center = start - Eigen::Vector3d(path.scale, 0.0, 0.0);
  }
  const WaypointSeries series = generate(path);
  const DerivativeReport deriv = derivative_check(series);
  if (out_file.empty() || out_file == "-") {
    write_waypoints_csv(series, std::cout);
  } else {
    std::ofstream os(out_file);
    if (!os) throw ConfigError("cannot write " + out_file);
    write_waypoints_csv(series, os);
    std::printf("wrote %lld waypoints to %s (derivative check: %s)\n",
                static_cast<long long>(series.count()), out_file.c_str(),
                deriv.pass ? "pass" : "FAIL");
  }
  return deriv.pass ? 0 : 1;
}

bool check_line(const char* name, bool ok) {
  std::printf("  [%s] %s\n", ok ? "PASS" : "FAIL", name);
  return ok;
}

// Built-in invariant sweep, small enough to run in a couple of seconds.
int cmd_check() {
  bool all = true;
  std::mt19937_64 rng(7);
  const auto random_matrix = [&rng](int rows, int cols) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
  };

  {
    bool ok = true;
    for (int rep = 0; rep < 100 && ok; ++rep) {
      const Matrix a = random_matrix(3, 7);
      const Matrix x = mp_inverse(a);
      const Matrix ax = a * x;
      const Matrix xa = x * a;
      ok = (a * x * a - a).norm() < 1e-8 && (x * a * x - x).norm() < 1e-8 &&
           (ax - ax.transpose()).norm() < 1e-8 &&
           (xa - xa.transpose()).norm() < 1e-8;
    }
    all &= check_line("Moore-Penrose: four Penrose conditions", ok);
  }
  {
    bool ok = true;
    std::uniform_real_distribution<double> logd(std::log(1e-3), std::log(1e3));
    for (int rep = 0; rep < 100 && ok; ++rep) {
      const Matrix a = random_matrix(2, 3);
      Vector p(2), q(3);
      for (int i = 0; i < 2; ++i) p(i) = std::exp(logd(rng));
      for (int i = 0; i < 3; ++i) q(i) = std::exp(logd(rng));
      const Matrix lhs = uc_inverse(p.asDiagonal() * a * q.asDiagonal());
      const Matrix rhs =
          q.cwiseInverse().asDiagonal() * uc_inverse(a) * p.cwiseInverse().asDiagonal();
      ok = (lhs - rhs).norm() < 1e-8 * rhs.norm();
    }
    all &= check_line("unit-consistent inverse: diagonal-scaling consistency", ok);
  }
  {
    bool ok = true;
    for (int rep = 0; rep < 20 && ok; ++rep) {
      const Matrix a = random_matrix(2, 3);
      PartitionSpec whole;
      whole.w_rows = {0, 1};
      whole.w_cols = {0, 1, 2};
      ok = (mx_inverse(a, whole) - uc_inverse(a)).norm() < 1e-10 &&
           (mx_inverse(a, PartitionSpec{}) - mp_inverse(a)).norm() < 1e-10;
    }
    all &= check_line("mixed inverse: whole-W == UC, empty == MP", ok);
  }
  {
    bool ok = true;
    for (const RobotModel& robot :
         {presets::three_dof_2rp(), presets::seven_dof_2rp4r()}) {
      std::uniform_real_distribution<double> angle(-1.0, 1.0);
      for (int rep = 0; rep < 20 && ok; ++rep) {
        Vector q(robot.dof());
        for (int i = 0; i < robot.dof(); ++i) q(i) = angle(rng) * 0.8;
        Matrix jg;
        try {
          jg = geometric_jacobian(robot, q).mat;
        } catch (const SingularityError&) {
          continue;
        }
        Matrix fd(robot.position_rows(), robot.dof());
        for (int c = 0; c < robot.dof(); ++c) {
          Vector qp = q, qm = q;
          qp(c) += 1e-6;
          qm(c) -= 1e-6;
          fd.col(c) = (forward_kinematics(robot.dh, qp).position -
                       forward_kinematics(robot.dh, qm).position)
                          .head(robot.position_rows()) /
                      2e-6;
        }
        ok = (jg.topRows(robot.position_rows()) - fd).cwiseAbs().maxCoeff() < 1e-5;
      }
    }
    all &= check_line("geometric Jacobian vs finite differences", ok);
  }
  {
    bool ok = true;
    for (int kind = 0; kind < 6 && ok; ++kind) {
      PathSpec spec;
      spec.kind = static_cast<PathKind>(kind);
      spec.scale = 0.3;
      spec.center = {1.0, 0.5, 0.2};
      spec.period = 10.0;
      spec.total_time = 10.0;
      spec.waypoints = 2000;
      Eigen::Vector3d start, end;
      evaluate_path(spec, 0.0, &start, nullptr, nullptr);
      evaluate_path(spec, spec.total_time, &end, nullptr, nullptr);
      ok = (end - start).norm() < 1e-9 * spec.scale &&
           derivative_check(generate(spec)).pass;
    }
    all &= check_line("paths: closure and analytic derivatives", ok);
  }
  {
    NoiseModel model;
    model.kind = NoiseKind::Random;
    model.base = Eigen::Vector2d(0.3, 0.5);
    model.seed = 99;
    NoiseSampler s1(model), s2(model);
    model.unit_factor = 1000.0;
    NoiseSampler s1000(model);
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
      const Vector a = s1.sample(0.1 * i);
      ok = a == s2.sample(0.1 * i) && (1000.0 * a) == s1000.sample(0.1 * i);
    }
    all &= check_line("noise: seeded determinism and exact unit scaling", ok);
  }
  {
    ExperimentConfig cfg;
    cfg.label = "check_cell";
    cfg.robot = presets::three_dof_2rp();
    cfg.path.kind = PathKind::Circle;
    cfg.path.scale = 0.6;
    cfg.path.total_time = 10.0;
    cfg.path.period = 10.0;
    cfg.path.waypoints = 200;
    cfg.scheme = SchemeId::Wmvn;
    cfg.backend = BackendKind::MX;
    cfg.unit_factors = {1.0, 1000.0};
    cfg.initial_q = Vector(3);
    cfg.initial_q << 0.5235987755982988, 0.5235987755982988, -0.7;
    const RunGroup group = run(cfg);
    all &= check_line("closed loop: mixed-inverse cross-unit consistency",
                      group.consistent);
  }
  std::printf("%s\n", all ? "all checks passed" : "CHECKS FAILED");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unit-consistent generalized inverses and pseudo-inverse "
               "path planning for redundant manipulators"};
  app.require_subcommand(1);

  CommonOverrides ov;
  std::string config_path;
  std::string matrix_path;
  std::string paths_out;

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment config");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--output-dir", ov.output_dir, "directory for CSV output");
  run_cmd->add_option("--seed", ov.seed, "override the noise seed");
  run_cmd->add_option("--units", ov.units, "override unit list, e.g. m,cm,mm");
  run_cmd->add_option("--backend", ov.backend, "override backend: mp, uc, or mx");
  run_cmd->add_option("--jobs", ov.jobs, "worker threads (0 = hardware)");

  CLI::App* matrix_cmd =
      app.add_subcommand("matrix", "run a directory or multi-run file of configs");
  matrix_cmd->add_option("path", matrix_path, "config directory or multi-run JSON")
      ->required();
  matrix_cmd->add_option("--output-dir", ov.output_dir, "directory for CSV output");
  matrix_cmd->add_option("--seed", ov.seed, "override the noise seed");
  matrix_cmd->add_option("--units", ov.units, "override unit list");
  matrix_cmd->add_option("--backend", ov.backend, "override backend");
  matrix_cmd->add_option("--jobs", ov.jobs, "worker threads (0 = hardware)");

  CLI::App* paths_cmd =
      app.add_subcommand("paths", "export the config's waypoint series as CSV");
  paths_cmd->add_option("config", config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  paths_cmd->add_option("--out", paths_out, "output file ('-' for stdout)");

  app.add_subcommand("check", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, ov);
    if (matrix_cmd->parsed()) return cmd_matrix(matrix_path, ov);
    if (paths_cmd->parsed()) return cmd_paths(config_path, paths_out);
    return cmd_check();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
