#pragma once

#include <Eigen/Dense>

#include <string>

#include "ucplan/error.hpp"
#include "ucplan/gi.hpp"

namespace ucplan {

enum class SchemeId { Mvn, Wmvn, PidPpp, SnsV, Man, Fpbm, SnsA };

SchemeId scheme_from_name(const std::string& name);
std::string scheme_name(SchemeId id);
bool scheme_is_velocity_level(SchemeId id);

struct SchemeState {
  double t = 0.0;
  Vector q;
  Vector qdot;
  Vector qddot;
};

struct GainSet {
  double alpha = 1000.0;  // 1/s
  double beta = 1000.0;   // 1/s^2
  double k1 = 1000.0;     // 1/s
  double k2 = 1000.0;     // 1/s^2
  double fpbm_alpha_weight = 0.5;  // in [0, 1]
  Vector weights;                  // diagonal of W; empty means identity
};

struct JointLimits {
  Vector qdot_max;
  Vector qddot_max;
};

/// Minimum velocity norm, Eq.-(1)-style with z = 0: qdot = GI(J) * rate.
Vector step_mvn(const Matrix& j, const Vector& desired_rate, GiBackend& gi);

/// Weighted minimum velocity norm. The weighted inverse is realized as
/// W^-1/2 * GI(J W^-1/2) so any backend preserves the weighting semantics;
/// with W = I and the MP backend this is the plain least-norm solution.
Vector step_wmvn(const Matrix& j, const Vector& desired_rate,
                 const Vector& weights, GiBackend& gi);

/// PID feedback scheme. pose_err = f(Q) - D_d; integral_acc holds
/// the running rectangle-rule integral of pose_err and is advanced by dt
/// after the command is formed (left rectangle, zero at t = 0).
Vector step_pid_ppp(const Matrix& j, const Vector& pose_err,
                    const Vector& desired_rate, Vector& integral_acc,
                    double dt, const GainSet& gains, GiBackend& gi);

/// Minimum acceleration norm: qddot = GI(J) * (accel - Jdot * qdot).
Vector step_man(const Matrix& j, const Matrix& jdot, const Vector& qdot,
                const Vector& desired_accel, GiBackend& gi);

/// Feedback-added weighted/unweighted blend at acceleration level.
/// Three GI applications per call: J_W^+, J^+, and (J W^-1 J^T)^-1.
Vector step_fpbm(const Matrix& j, const Matrix& jdot, const Vector& qdot,
                 const Vector& pose_err, const Vector& desired_rate,
                 const Vector& desired_accel, const GainSet& gains,
                 GiBackend& gi);

struct SnsResult {
  Vector command;
  double task_scale = 1.0;
  int saturation_rounds = 0;
};

/// Saturation in the null space, velocity level. Saturates the joint with
/// the largest |command| / limit ratio, re-solves through (J * W_sel), and
/// falls back to the best task scaling found when no saturation set is
/// feasible. Every round issues two GI calls.
SnsResult step_sns_v(const Matrix& j, const Vector& desired_rate,
                     const Vector& qdot_max, GiBackend& gi);

/// Acceleration-level SNS on (accel - Jdot * qdot) with qddot bounds.
SnsResult step_sns_a(const Matrix& j, const Matrix& jdot, const Vector& qdot,
                     const Vector& desired_accel, const Vector& qddot_max,
                     GiBackend& gi);

/// Advances the state by one step: explicit Euler for velocity commands,
/// semi-implicit Euler (velocity first) for acceleration commands.
SchemeState integrate(const SchemeState& state, const Vector& command,
                      double dt, bool velocity_level);

}  // namespace ucplan
