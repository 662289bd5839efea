#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "ucplan/error.hpp"
#include "ucplan/gi.hpp"

namespace ucplan {

enum class JointKind { Revolute, Prismatic };

/// One Denavit-Hartenberg row (standard/distal convention):
/// T_i = RotZ(theta) * TransZ(d) * TransX(a) * RotX(alpha).
/// The joint variable adds to theta (revolute) or d (prismatic).
struct DHRow {
  double theta_offset = 0.0;  // rad
  double d = 0.0;             // model length units
  double a = 0.0;             // model length units
  double alpha = 0.0;         // rad
  JointKind kind = JointKind::Revolute;
};

struct DHTable {
  std::vector<DHRow> joints;

  int dof() const { return static_cast<int>(joints.size()); }
};

/// Which task-space rows the Jacobian and pose vector carry.
enum class TaskKind {
  PlanarXY,  // m = 2: x, y
  Spatial6,  // m = 6: x, y, z, roll, pitch, yaw (fixed-axis x-y-z RPY rates)
};

struct RobotModel {
  std::string name;
  DHTable dh;
  TaskKind task = TaskKind::Spatial6;

  int dof() const { return dh.dof(); }
  int task_dim() const { return task == TaskKind::PlanarXY ? 2 : 6; }
  int position_rows() const { return task == TaskKind::PlanarXY ? 2 : 3; }
};

/// End-effector pose. Orientation is fixed-axis x-y-z roll/pitch/yaw,
/// i.e. R = Rz(yaw) * Ry(pitch) * Rx(roll).
struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d rpy = Eigen::Vector3d::Zero();
};

/// Unit factor u in {1, 10, 100, 1000} mapping meters to m/dm/cm/mm.
struct UnitScale {
  double factor = 1.0;
};

/// m x n Jacobian with the column-role annotation (which columns
/// differentiate w.r.t. revolute vs. prismatic joints).
struct Jacobian {
  Matrix mat;
  std::vector<JointKind> columns;
  int position_rows = 0;
};

Eigen::Matrix4d dh_transform(const DHRow& row, double q);

Pose forward_kinematics(const DHTable& dh, const Vector& q);

/// Task-space pose vector for a robot: [x, y] (planar) or
/// [x, y, z, roll, pitch, yaw].
Vector task_pose(const RobotModel& robot, const Vector& q);

/// Closed-form 2x3 Jacobian of the planar 2RP arm (position rows only).
Matrix analytical_jacobian_3dof(const DHTable& dh, const Vector& q);

/// Geometric Jacobian with revolute columns z x (p_e - p) / z and prismatic
/// columns z / 0; for Spatial6 robots the angular rows are mapped to RPY
/// rates. Throws SingularityError near pitch = +-90 deg where the RPY rate
/// map is ill-conditioned.
Jacobian geometric_jacobian(const RobotModel& robot, const Vector& q);

/// dJ/dt along q(t), by central difference: (J(q + h qdot) - J(q - h qdot)) / 2h.
Matrix jacobian_time_derivative(const RobotModel& robot, const Vector& q,
                                const Vector& qdot);

/// Multiplies every d and a entry by scale.factor; angles are untouched.
DHTable rescale_units(const DHTable& dh, const UnitScale& scale);
RobotModel rescale_units(const RobotModel& robot, const UnitScale& scale);

/// Block-partition rule for the mixed inverse: each prismatic joint, plus
/// every earlier revolute joint whose axis is not structurally parallel to
/// the prismatic axis, goes into the W column block; the position rows form
/// the W row block when any column was selected.
PartitionSpec partition_rule(const RobotModel& robot);

/// Wraps an angle difference into [-pi, pi].
double wrap_angle(double a);

/// Error vector between achieved and desired task poses; orientation
/// components are angle-wrapped.
Vector pose_error(const RobotModel& robot, const Vector& achieved,
                  const Vector& desired);

namespace presets {

/// Planar 2RP arm, lengths in meters (a1 = 1.0, a2 = 1.1).
RobotModel three_dof_2rp();

/// 7DoF 2RP4R arm, lengths in meters (a2 = 0.25, d5 = 0.14).
RobotModel seven_dof_2rp4r();

/// Look up a preset by name ("3dof_2rp" or "7dof_2rp4r").
RobotModel by_name(const std::string& name);

}  // namespace presets

}  // namespace ucplan
