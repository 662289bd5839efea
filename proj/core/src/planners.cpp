#include "ucplan/planners.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ucplan {

namespace {

Vector weights_or_identity(const Vector& weights, Eigen::Index n,
                           const char* who) {
  if (weights.size() == 0) return Vector::Ones(n);
  if (weights.size() != n) {
    throw InvalidInputError(std::string(who) + ": weight vector length mismatch");
  }
  if ((weights.array() <= 0.0).any()) {
    throw InvalidInputError(std::string(who) + ": weights must be positive");
  }
  return weights;
}

// Throws when J W^-1 J^T is numerically singular; returns a condition
// estimate otherwise.
double check_weighted_conditioning(const Matrix& jw_half, const char* who) {
  Eigen::JacobiSVD<Matrix> dec(jw_half);
  const Vector& s = dec.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  const double cutoff = static_cast<double>(std::max(jw_half.rows(), jw_half.cols())) *
                        std::numeric_limits<double>::epsilon() * smax;
  if (jw_half.rows() > jw_half.cols() || smin <= cutoff) {
    throw SingularityError(
        std::string(who) + ": J W^-1 J^T is singular",
        smin > 0.0 ? (smax / smin) * (smax / smin)
                   : std::numeric_limits<double>::infinity());
  }
  return (smax / smin) * (smax / smin);
}

// Weighted generalized inverse W^-1/2 * GI(J W^-1/2). One GI call.
Matrix weighted_gi(const Matrix& j, const Vector& w, GiBackend& gi,
                   const char* who) {
  const Vector w_inv_sqrt = w.array().rsqrt();
  const Matrix jw_half = j * w_inv_sqrt.asDiagonal();
  check_weighted_conditioning(jw_half, who);
  return w_inv_sqrt.asDiagonal() * gi.apply(jw_half);
}

struct SnsRoundOutcome {
  Vector candidate;
  Vector task_part;  // (J W_sel)^+ * target, scaled by s in the fallback
};

// Largest s in [0, 1] such that |s * a_i + b_i| <= limit_i for all i.
// Returns 0 when no such s exists.
double task_scaling_factor(const Vector& a, const Vector& b,
                           const Vector& limits) {
  double s_upper = 1.0;
  double s_lower = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double lim = limits(i);
    if (a(i) == 0.0) {
      if (std::abs(b(i)) > lim) return 0.0;
      continue;
    }
    double lo = (-lim - b(i)) / a(i);
    double hi = (lim - b(i)) / a(i);
    if (lo > hi) std::swap(lo, hi);
    s_upper = std::min(s_upper, hi);
    s_lower = std::max(s_lower, lo);
  }
  if (s_upper < s_lower || s_upper <= 0.0) return 0.0;
  return s_upper;
}

SnsResult sns_loop(const Matrix& j, const Vector& target, const Vector& limits,
                   GiBackend& gi, const char* who) {
  const Eigen::Index n = j.cols();
  const Eigen::Index m = j.rows();
  if (limits.size() != n) {
    throw InvalidInputError(std::string(who) + ": limits length mismatch");
  }
  if ((limits.array() <= 0.0).any()) {
    throw InvalidInputError(std::string(who) + ": limits must be positive");
  }

  Vector sel = Vector::Ones(n);   // diagonal selection mask
  Vector qn = Vector::Zero(n);    // saturated (null-space) contribution
  double s_best = 0.0;
  Vector sel_best, qn_best;
  int rounds = 0;
  const int max_rounds = static_cast<int>(2 * n);

  const auto clamp_to_limits = [&](Vector v) {
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = std::clamp(v(i), -limits(i), limits(i));
    }
    return v;
  };

  for (; rounds < max_rounds; ++rounds) {
    const Matrix jw = j * sel.asDiagonal();
    const Matrix jw_gi = gi.apply(jw);
    const Vector candidate = qn + jw_gi * (target - j * qn);
    // The task-scaling term is solved with its own GI call; one round
    // therefore costs two backend calls.
    const Vector task_part = gi.apply(jw) * target;

    bool feasible = true;
    double worst_ratio = 0.0;
    Eigen::Index worst = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ratio = std::abs(candidate(i)) / limits(i);
      if (ratio > 1.0 + 1e-12) feasible = false;
      if (sel(i) != 0.0 && ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = i;
      }
    }
    if (feasible) {
      SnsResult out;
      out.command = clamp_to_limits(candidate);
      out.task_scale = 1.0;
      out.saturation_rounds = rounds;
      return out;
    }

    const double s = task_scaling_factor(task_part, candidate - task_part, limits);
    if (s > s_best) {
      s_best = s;
      sel_best = sel;
      qn_best = qn;
    }

    if (worst < 0) break;  // every joint already saturated
    sel(worst) = 0.0;
    qn(worst) = candidate(worst) > 0.0 ? limits(worst) : -limits(worst);

    // Task no longer reachable through the remaining joints: stop and fall
    // back to the best scaled solution.
    const Matrix j_active = j * sel.asDiagonal();
    Eigen::JacobiSVD<Matrix> dec(j_active);
    const Vector& sv = dec.singularValues();
    const double cutoff = static_cast<double>(std::max(j_active.rows(), j_active.cols())) *
                          std::numeric_limits<double>::epsilon() *
                          (sv.size() > 0 ? sv(0) : 0.0);
    const Eigen::Index rank =
        (sv.array() > cutoff).count();
    if (rank < m) break;
  }

  if (s_best <= 0.0) {
    throw InfeasibleError(std::string(who) +
                          ": task infeasible within joint limits even at s -> 0");
  }
  const Matrix jw = j * sel_best.asDiagonal();
  const Matrix jw_gi = gi.apply(jw);
  SnsResult out;
  out.command = clamp_to_limits(qn_best + jw_gi * (s_best * target - j * qn_best));
  out.task_scale = s_best;
  out.saturation_rounds = rounds;
  return out;
}

}  // namespace

SchemeId scheme_from_name(const std::string& name) {
  if (name == "mvn") return SchemeId::Mvn;
  if (name == "wmvn") return SchemeId::Wmvn;
  if (name == "pid_ppp") return SchemeId::PidPpp;
  if (name == "sns_v") return SchemeId::SnsV;
  if (name == "man") return SchemeId::Man;
  if (name == "fpbm") return SchemeId::Fpbm;
  if (name == "sns_a") return SchemeId::SnsA;
  throw ConfigError("unknown scheme: " + name);
}

std::string scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::Mvn: return "mvn";
    case SchemeId::Wmvn: return "wmvn";
    case SchemeId::PidPpp: return "pid_ppp";
    case SchemeId::SnsV: return "sns_v";
    case SchemeId::Man: return "man";
    case SchemeId::Fpbm: return "fpbm";
    case SchemeId::SnsA: return "sns_a";
  }
  return "?";
}

bool scheme_is_velocity_level(SchemeId id) {
  switch (id) {
    case SchemeId::Mvn:
    case SchemeId::Wmvn:
    case SchemeId::PidPpp:
    case SchemeId::SnsV:
      return true;
    case SchemeId::Man:
    case SchemeId::Fpbm:
    case SchemeId::SnsA:
      return false;
  }
  return true;
}

Vector step_mvn(const Matrix& j, const Vector& desired_rate, GiBackend& gi) {
  if (desired_rate.size() != j.rows()) {
    throw InvalidInputError("step_mvn: rate length does not match Jacobian rows");
  }
  return gi.apply(j) * desired_rate;
}

Vector step_wmvn(const Matrix& j, const Vector& desired_rate,
                 const Vector& weights, GiBackend& gi) {
  if (desired_rate.size() != j.rows()) {
    throw InvalidInputError("step_wmvn: rate length does not match Jacobian rows");
  }
  const Vector w = weights_or_identity(weights, j.cols(), "step_wmvn");
  return weighted_gi(j, w, gi, "step_wmvn") * desired_rate;
}

Vector step_pid_ppp(const Matrix& j, const Vector& pose_err,
                    const Vector& desired_rate, Vector& integral_acc,
                    double dt, const GainSet& gains, GiBackend& gi) {
  if (pose_err.size() != j.rows() || desired_rate.size() != j.rows() ||
      integral_acc.size() != j.rows()) {
    throw InvalidInputError("step_pid_ppp: task vector length mismatch");
  }
  const Vector command_rate =
      desired_rate - gains.alpha * pose_err - gains.beta * integral_acc;
  const Vector qdot = gi.apply(j) * command_rate;
  integral_acc += pose_err * dt;
  return qdot;
}

Vector step_man(const Matrix& j, const Matrix& jdot, const Vector& qdot,
                const Vector& desired_accel, GiBackend& gi) {
  if (jdot.rows() != j.rows() || jdot.cols() != j.cols()) {
    throw InvalidInputError("step_man: Jdot shape mismatch");
  }
  if (desired_accel.size() != j.rows() || qdot.size() != j.cols()) {
    throw InvalidInputError("step_man: vector length mismatch");
  }
  return gi.apply(j) * (desired_accel - jdot * qdot);
}

Vector step_fpbm(const Matrix& j, const Matrix& jdot, const Vector& qdot,
                 const Vector& pose_err, const Vector& desired_rate,
                 const Vector& desired_accel, const GainSet& gains,
                 GiBackend& gi) {
  const Eigen::Index n = j.cols();
  if (jdot.rows() != j.rows() || jdot.cols() != n) {
    throw InvalidInputError("step_fpbm: Jdot shape mismatch");
  }
  const Vector w = weights_or_identity(gains.weights, n, "step_fpbm");
  const Vector w_inv = w.cwiseInverse();
  const double a = gains.fpbm_alpha_weight;

  const Matrix j_w_gi = weighted_gi(j, w, gi, "step_fpbm");  // GI call 1
  const Matrix j_gi = gi.apply(j);                           // GI call 2
  const Matrix task_sq = j * w_inv.asDiagonal() * j.transpose();
  const Matrix task_sq_inv = gi.apply_task_square(task_sq);  // GI call 3

  const Vector feed = desired_accel - jdot * qdot +
                      gains.k1 * (desired_rate - j * qdot) -
                      gains.k2 * pose_err;
  const Matrix blend = a * j_w_gi + (1.0 - a) * j_gi;
  const Vector null_term = a * ((Matrix::Identity(n, n) - j_w_gi * j) *
                                (w_inv.asDiagonal() * jdot.transpose()) *
                                (task_sq_inv * desired_rate));
  return blend * feed + null_term;
}

SnsResult step_sns_v(const Matrix& j, const Vector& desired_rate,
                     const Vector& qdot_max, GiBackend& gi) {
  if (desired_rate.size() != j.rows()) {
    throw InvalidInputError("step_sns_v: rate length mismatch");
  }
  return sns_loop(j, desired_rate, qdot_max, gi, "step_sns_v");
}

SnsResult step_sns_a(const Matrix& j, const Matrix& jdot, const Vector& qdot,
                     const Vector& desired_accel, const Vector& qddot_max,
                     GiBackend& gi) {
  if (jdot.rows() != j.rows() || jdot.cols() != j.cols()) {
    throw InvalidInputError("step_sns_a: Jdot shape mismatch");
  }
  return sns_loop(j, desired_accel - jdot * qdot, qddot_max, gi, "step_sns_a");
}

SchemeState integrate(const SchemeState& state, const Vector& command,
                      double dt, bool velocity_level) {
  if (!(dt > 0.0)) throw InvalidInputError("integrate: dt must be positive");
  if (command.size() != state.q.size()) {
    throw InvalidInputError("integrate: command length mismatch");
  }
  SchemeState next = state;
  if (velocity_level) {
    next.qdot = command;
    next.q = state.q + command * dt;
  } else {
    next.qddot = command;
    next.qdot = state.qdot + command * dt;
    next.q = state.q + next.qdot * dt;
  }
  next.t = state.t + dt;
  return next;
}

}  // namespace ucplan
