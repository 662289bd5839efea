#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ucplan/gi.hpp"
#include "ucplan/kinematics.hpp"
#include "ucplan/noise.hpp"
#include "ucplan/planners.hpp"
#include "ucplan/trajectories.hpp"

namespace ucplan {

enum class BackendKind { MP, UC, MX };

BackendKind backend_from_name(const std::string& name);
std::string backend_name(BackendKind kind);

/// One experiment cell: a scheme tracking a path on a robot, swept over
/// unit factors. All lengths (path, limits, initial prismatic values,
/// weights) are given in base units (meters); the runner rescales them per
/// unit factor.
struct ExperimentConfig {
  std::string label;
  RobotModel robot;
  PathSpec path;
  bool center_auto = true;  // place the curve start at FK(initial_q)
  SchemeId scheme = SchemeId::Mvn;
  BackendKind backend = BackendKind::MX;
  std::vector<double> unit_factors = {1.0, 10.0, 100.0, 1000.0};
  NoiseKind noise_kind = NoiseKind::Zero;
  std::uint64_t noise_seed = 0;
  std::optional<Vector> noise_base;  // default: reference base for the level
  GainSet gains;
  JointLimits limits;  // empty vectors: 1e6 per joint
  Vector initial_q;
  std::string output_dir;
};

struct ExperimentRecord {
  std::string label;
  SchemeId scheme = SchemeId::Mvn;
  BackendKind backend = BackendKind::MX;
  PathKind path = PathKind::Circle;
  NoiseKind noise = NoiseKind::Zero;
  double unit_factor = 1.0;
  std::uint64_t seed = 0;

  Eigen::VectorXd times;
  Eigen::VectorXd errors_mm;
  Eigen::MatrixXd desired_positions;   // N x 3, model units
  Eigen::MatrixXd achieved_positions;  // N x 3, model units
  Eigen::Index completed = 0;

  double mean_error_mm = 0.0;
  double max_error_mm = 0.0;
  long gi_calls = 0;
  double wall_seconds = 0.0;
  bool diverged = false;
  std::string divergence_reason;

  /// Resolved per-run constants (path center, gains, dt, ...) as a JSON
  /// string; deterministic, no timing data.
  std::string metadata_json;
};

/// Verdict over the unit sweep of one config. worst_relative_deviation is
/// the largest per-waypoint deviation expressed on the relative-tolerance
/// scale: values below kConsistencyRelTol are within tolerance.
struct RunGroup {
  ExperimentConfig config;
  std::vector<ExperimentRecord> records;  // one per unit factor
  bool consistent = false;
  double worst_relative_deviation = 0.0;
};

/// Per-waypoint tolerance for the cross-unit comparison of error series
/// (relative, with a tiny absolute floor in mm).
inline constexpr double kConsistencyRelTol = 1e-6;
inline constexpr double kConsistencyFloorMm = 1e-9;

/// Fully-resolved inputs for one closed-loop simulation (everything already
/// expressed in the run's model units).
struct SeriesRun {
  RobotModel robot;
  WaypointSeries series;
  Eigen::Vector3d desired_rpy = Eigen::Vector3d::Zero();  // Spatial6 only
  SchemeId scheme = SchemeId::Mvn;
  GainSet gains;
  Vector qdot_max;
  Vector qddot_max;
  Vector initial_q;
  double unit_factor = 1.0;
};

/// Core waypoint loop: scheme step -> integrate -> FK -> record. Aborts
/// with the diverged flag when the error exceeds 1e6 mm or the state goes
/// non-finite.
ExperimentRecord run_series(const SeriesRun& in, NoiseSampler& sampler,
                            GiBackend& backend);

/// Simulates the closed loop for a single unit factor.
ExperimentRecord run_single(const ExperimentConfig& config, double unit_factor);

/// Runs every unit factor of the config and evaluates consistency.
RunGroup run(const ExperimentConfig& config);

struct MatrixResult {
  std::vector<RunGroup> groups;
  bool all_consistent = true;
  bool any_divergence = false;
};

/// Runs all configs (cells may execute in parallel; results are collected
/// in config order). Throws ConfigError on an empty list.
MatrixResult run_matrix(const std::vector<ExperimentConfig>& configs,
                        int jobs = 0);

/// Compares error series across unit factors; fills the group verdict.
void evaluate_consistency(RunGroup& group);

/// CSV: t,err_mm,x,y,z,xd,yd,zd (achieved then desired positions).
void write_run_csv(const ExperimentRecord& record, std::ostream& os);

/// Wide summary mirroring the error tables: one row per cell, one mean
/// error column per (backend, unit).
void write_summary_csv(const MatrixResult& result, std::ostream& os);

/// Plain-text CONSISTENT/INCONSISTENT report per (scheme, backend, noise,
/// path) group.
void write_consistency_report(const MatrixResult& result, std::ostream& os);

/// File name stem for a record: label + unit suffix (m/dm/cm/mm).
std::string record_stem(const ExperimentRecord& record);

std::string unit_name(double factor);

}  // namespace ucplan
