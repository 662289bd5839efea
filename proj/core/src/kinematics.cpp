#include "ucplan/kinematics.hpp"

#include <cmath>
#include <numbers>

namespace ucplan {

namespace {

constexpr double kRpySingularityTol = 1e-6;

void require_match(const DHTable& dh, const Vector& q, const char* who) {
  if (q.size() != dh.dof()) {
    throw InvalidInputError(std::string(who) + ": joint vector length " +
                            std::to_string(q.size()) + " does not match " +
                            std::to_string(dh.dof()) + " joints");
  }
  if (!q.allFinite()) {
    throw InvalidInputError(std::string(who) + ": non-finite joint value");
  }
}

Eigen::Vector3d rpy_from_rotation(const Eigen::Matrix3d& r) {
  // R = Rz(yaw) Ry(pitch) Rx(roll)
  const double pitch = std::atan2(-r(2, 0), std::hypot(r(0, 0), r(1, 0)));
  double roll, yaw;
  if (std::abs(std::cos(pitch)) < kRpySingularityTol) {
    // Gimbal lock: fold roll into yaw.
    roll = 0.0;
    yaw = std::atan2(-r(0, 1), r(1, 1));
  } else {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  }
  return {roll, pitch, yaw};
}

// Maps world-frame angular velocity to fixed-axis x-y-z RPY rates.
Eigen::Matrix3d rpy_rate_map(const Eigen::Vector3d& rpy) {
  const double cp = std::cos(rpy(1));
  if (std::abs(cp) < kRpySingularityTol) {
    throw SingularityError(
        "geometric_jacobian: RPY rate map singular (pitch near +-90 deg)",
        1.0 / std::abs(cp));
  }
  const double sp = std::sin(rpy(1));
  const double cy = std::cos(rpy(2));
  const double sy = std::sin(rpy(2));
  Eigen::Matrix3d e;
  e << cy / cp, sy / cp, 0.0,
      -sy, cy, 0.0,
      cy * sp / cp, sy * sp / cp, 1.0;
  return e;
}

struct FrameChain {
  std::vector<Eigen::Vector3d> origins;  // origins[i] = frame-i origin, i in [0, n]
  std::vector<Eigen::Vector3d> z_axes;   // z_axes[i] = frame-i z axis
  Eigen::Matrix4d tip = Eigen::Matrix4d::Identity();
};

FrameChain frame_chain(const DHTable& dh, const Vector& q) {
  FrameChain chain;
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  chain.origins.push_back(t.block<3, 1>(0, 3));
  chain.z_axes.push_back(t.block<3, 1>(0, 2));
  for (int i = 0; i < dh.dof(); ++i) {
    t = t * dh_transform(dh.joints[static_cast<size_t>(i)], q(i));
    chain.origins.push_back(t.block<3, 1>(0, 3));
    chain.z_axes.push_back(t.block<3, 1>(0, 2));
  }
  chain.tip = t;
  return chain;
}

}  // namespace

Eigen::Matrix4d dh_transform(const DHRow& row, double q) {
  const double theta =
      row.kind == JointKind::Revolute ? row.theta_offset + q : row.theta_offset;
  const double d = row.kind == JointKind::Prismatic ? row.d + q : row.d;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Eigen::Matrix4d t;
  t << ct, -st * ca, st * sa, row.a * ct,
      st, ct * ca, -ct * sa, row.a * st,
      0.0, sa, ca, d,
      0.0, 0.0, 0.0, 1.0;
  return t;
}

Pose forward_kinematics(const DHTable& dh, const Vector& q) {
  require_match(dh, q, "forward_kinematics");
  const FrameChain chain = frame_chain(dh, q);
  Pose pose;
  pose.position = chain.tip.block<3, 1>(0, 3);
  pose.rpy = rpy_from_rotation(chain.tip.block<3, 3>(0, 0));
  return pose;
}

Vector task_pose(const RobotModel& robot, const Vector& q) {
  const Pose pose = forward_kinematics(robot.dh, q);
  if (robot.task == TaskKind::PlanarXY) {
    return pose.position.head<2>();
  }
  Vector out(6);
  out << pose.position, pose.rpy;
  return out;
}

Matrix analytical_jacobian_3dof(const DHTable& dh, const Vector& q) {
  require_match(dh, q, "analytical_jacobian_3dof");
  if (dh.dof() != 3 || dh.joints[0].kind != JointKind::Revolute ||
      dh.joints[1].kind != JointKind::Revolute ||
      dh.joints[2].kind != JointKind::Prismatic) {
    throw InvalidInputError("analytical_jacobian_3dof: expects the 2RP planar arm");
  }
  const double a1 = dh.joints[0].a;
  const double a2 = dh.joints[1].a;
  const double d3 = dh.joints[2].d + q(2);
  const double s1 = std::sin(q(0)), c1 = std::cos(q(0));
  const double s12 = std::sin(q(0) + q(1)), c12 = std::cos(q(0) + q(1));
  Matrix j(2, 3);
  j << -a1 * s1 - a2 * s12 + d3 * c12, -a2 * s12 + d3 * c12, s12,
      a1 * c1 + a2 * c12 + d3 * s12, a2 * c12 + d3 * s12, -c12;
  return j;
}

Jacobian geometric_jacobian(const RobotModel& robot, const Vector& q) {
  require_match(robot.dh, q, "geometric_jacobian");
  const FrameChain chain = frame_chain(robot.dh, q);
  const Eigen::Vector3d pe = chain.tip.block<3, 1>(0, 3);
  const int n = robot.dof();

  Matrix jp(3, n);  // linear velocity rows
  Matrix jo(3, n);  // angular velocity rows
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& z = chain.z_axes[static_cast<size_t>(i)];
    const Eigen::Vector3d& p = chain.origins[static_cast<size_t>(i)];
    if (robot.dh.joints[static_cast<size_t>(i)].kind == JointKind::Revolute) {
      jp.col(i) = z.cross(pe - p);
      jo.col(i) = z;
    } else {
      jp.col(i) = z;
      jo.col(i).setZero();
    }
  }

  Jacobian out;
  out.columns.reserve(static_cast<size_t>(n));
  for (const DHRow& row : robot.dh.joints) out.columns.push_back(row.kind);
  out.position_rows = robot.position_rows();

  if (robot.task == TaskKind::PlanarXY) {
    out.mat = jp.topRows(2);
    return out;
  }
  const Eigen::Vector3d rpy = rpy_from_rotation(chain.tip.block<3, 3>(0, 0));
  out.mat.resize(6, n);
  out.mat.topRows(3) = jp;
  out.mat.bottomRows(3) = rpy_rate_map(rpy) * jo;
  return out;
}

Matrix jacobian_time_derivative(const RobotModel& robot, const Vector& q,
                                const Vector& qdot) {
  require_match(robot.dh, q, "jacobian_time_derivative");
  if (qdot.size() != q.size()) {
    throw InvalidInputError("jacobian_time_derivative: qdot length mismatch");
  }
  constexpr double h = 1e-6;
  const Matrix jplus = geometric_jacobian(robot, q + h * qdot).mat;
  const Matrix jminus = geometric_jacobian(robot, q - h * qdot).mat;
  return (jplus - jminus) / (2.0 * h);
}

DHTable rescale_units(const DHTable& dh, const UnitScale& scale) {
  if (!(scale.factor > 0.0)) {
    throw InvalidInputError("rescale_units: factor must be positive");
  }
  DHTable out = dh;
  for (DHRow& row : out.joints) {
    row.d *= scale.factor;
    row.a *= scale.factor;
  }
  return out;
}

RobotModel rescale_units(const RobotModel& robot, const UnitScale& scale) {
  RobotModel out = robot;
  out.dh = rescale_units(robot.dh, scale);
  return out;
}

PartitionSpec partition_rule(const RobotModel& robot) {
  const int n = robot.dof();

  // Structural parallelism: two joint axes count as parallel only if they
  // are parallel at every probe configuration. A single configuration (e.g.
  // all zeros) can make axes line up by accident.
  std::vector<Vector> probes;
  for (int k = 0; k < 5; ++k) {
    Vector q(n);
    for (int i = 0; i < n; ++i) {
      q(i) = 0.3 + 0.17 * i + 0.31 * k;
    }
    probes.push_back(q);
  }

  std::vector<bool> in_w(static_cast<size_t>(n), false);
  for (int p = 0; p < n; ++p) {
    if (robot.dh.joints[static_cast<size_t>(p)].kind != JointKind::Prismatic)
      continue;
    in_w[static_cast<size_t>(p)] = true;
    for (int r = 0; r < p; ++r) {
      if (robot.dh.joints[static_cast<size_t>(r)].kind != JointKind::Revolute)
        continue;
      bool parallel_everywhere = true;
      for (const Vector& q : probes) {
        const FrameChain chain = frame_chain(robot.dh, q);
        const double dot = std::abs(
            chain.z_axes[static_cast<size_t>(r)].dot(chain.z_axes[static_cast<size_t>(p)]));
        if (dot <= 1.0 - 1e-9) {
          parallel_everywhere = false;
          break;
        }
      }
      if (!parallel_everywhere) in_w[static_cast<size_t>(r)] = true;
    }
  }

  PartitionSpec spec;
  for (int i = 0; i < n; ++i)
    if (in_w[static_cast<size_t>(i)]) spec.w_cols.push_back(i);
  if (!spec.w_cols.empty()) {
    for (int r = 0; r < robot.position_rows(); ++r) spec.w_rows.push_back(r);
  }
  return spec;
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a + pi, 2.0 * pi);
  if (a < 0.0) a += 2.0 * pi;
  return a - pi;
}

Vector pose_error(const RobotModel& robot, const Vector& achieved,
                  const Vector& desired) {
  if (achieved.size() != robot.task_dim() || desired.size() != robot.task_dim()) {
    throw InvalidInputError("pose_error: task vector length mismatch");
  }
  Vector err = achieved - desired;
  for (int i = robot.position_rows(); i < robot.task_dim(); ++i) {
    err(i) = wrap_angle(err(i));
  }
  return err;
}

namespace presets {

RobotModel three_dof_2rp() {
  RobotModel robot;
  robot.name = "3dof_2rp";
  robot.task = TaskKind::PlanarXY;
  robot.dh.joints = {
      {0.0, 0.0, 1.0, 0.0, JointKind::Revolute},
      {0.0, 0.0, 1.1, std::numbers::pi / 2.0, JointKind::Revolute},
      {0.0, 0.0, 0.0, 0.0, JointKind::Prismatic},
  };
  return robot;
}

RobotModel seven_dof_2rp4r() {
  constexpr double half_pi = std::numbers::pi / 2.0;
  RobotModel robot;
  robot.name = "7dof_2rp4r";
  robot.task = TaskKind::Spatial6;
  robot.dh.joints = {
      {0.0, 0.0, 0.0, half_pi, JointKind::Revolute},
      {0.0, 0.0, 0.25, half_pi, JointKind::Revolute},
      {0.0, 0.0, 0.0, 0.0, JointKind::Prismatic},
      {0.0, 0.0, 0.0, half_pi, JointKind::Revolute},
      {0.0, 0.14, 0.0, half_pi, JointKind::Revolute},
      {0.0, 0.0, 0.0, half_pi, JointKind::Revolute},
      {0.0, 0.0, 0.0, 0.0, JointKind::Revolute},
  };
  return robot;
}

RobotModel by_name(const std::string& name) {
  if (name == "3dof_2rp") return three_dof_2rp();
  if (name == "7dof_2rp4r") return seven_dof_2rp4r();
  throw ConfigError("unknown robot preset: " + name);
}

}  // namespace presets

}  // namespace ucplan
