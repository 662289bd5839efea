#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

#include "ucplan/error.hpp"

namespace ucplan {

enum class PathKind {
  Circle,
  Rhodonea,
  Tricuspid,
  InterlacedCircle,
  Rhodonea3d,
  BentTricuspid,
};

PathKind path_kind_from_name(const std::string& name);
std::string path_kind_name(PathKind kind);
bool path_kind_is_3d(PathKind kind);

/// Parametric closed curve sampled into waypoints. All lengths are in
/// model units; total_time must be an integer multiple of period so the
/// curve closes.
struct PathSpec {
  PathKind kind = PathKind::Circle;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double scale = 1.0;        // curve size (circumradius for all kinds)
  double period = 10.0;      // seconds per lap
  int petal_count = 3;       // rhodonea only
  double z_amplitude = 0.0;  // 3d kinds; 0 picks scale / 4
  int waypoints = 7000;
  double total_time = 10.0;

  /// The same curve with every length multiplied by k (unit change).
  PathSpec scaled(double k) const;
};

struct WaypointSeries {
  PathSpec spec;
  Eigen::VectorXd times;
  Eigen::MatrixXd positions;      // N x 3
  Eigen::MatrixXd rates;          // N x 3, analytic d/dt
  Eigen::MatrixXd accelerations;  // N x 3, analytic d2/dt2

  Eigen::Index count() const { return times.size(); }
};

/// Samples the curve at t_i = i * (total_time / waypoints).
WaypointSeries generate(const PathSpec& spec);

/// Evaluates position/rate/acceleration of the curve at an arbitrary time.
void evaluate_path(const PathSpec& spec, double t, Eigen::Vector3d* position,
                   Eigen::Vector3d* rate, Eigen::Vector3d* acceleration);

struct DerivativeReport {
  bool pass = false;
  double max_rate_deviation = 0.0;
  double max_accel_deviation = 0.0;
  double rate_tolerance = 0.0;
  double accel_tolerance = 0.0;
};

/// Central-difference cross-check of the stored rates and accelerations
/// against the sampled positions.
DerivativeReport derivative_check(const WaypointSeries& series);

/// CSV export: t,x,y,z,xd,yd,zd,xdd,ydd,zdd.
void write_waypoints_csv(const WaypointSeries& series, std::ostream& os);

}  // namespace ucplan
