#include "ucplan/harness.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace ucplan {

namespace {

using nlohmann::json;

constexpr double kDivergenceLimitMm = 1e6;
constexpr double kDefaultLimit = 1e6;

Vector prismatic_scaled(const Vector& v, const RobotModel& robot, double factor) {
  Vector out = v;
  for (int i = 0; i < robot.dof(); ++i) {
    if (robot.dh.joints[static_cast<size_t>(i)].kind == JointKind::Prismatic) {
      out(i) *= factor;
    }
  }
  return out;
}

Vector limits_or_default(const Vector& v, int n) {
  if (v.size() == 0) return Vector::Constant(n, kDefaultLimit);
  if (v.size() != n) throw ConfigError("limits length does not match joint count");
  return v;
}

GiBackend make_backend(BackendKind kind, const RobotModel& robot) {
  switch (kind) {
    case BackendKind::MP:
      return GiBackend::mp();
    case BackendKind::UC:
      return GiBackend::uc();
    case BackendKind::MX:
      return GiBackend::mx(partition_rule(robot));
  }
  throw ConfigError("unknown backend");
}

/// Resolves the path center so the curve starts at FK(initial_q). Every
/// kind starts at center + (scale, 0, 0).
PathSpec resolve_path(const ExperimentConfig& config) {
  PathSpec path = config.path;
  if (config.center_auto) {
    const Pose p0 = forward_kinematics(config.robot.dh, config.initial_q);
    Eigen::Vector3d start = p0.position;
    if (config.robot.task == TaskKind::PlanarXY) start.z() = 0.0;
    path.center = start - Eigen::Vector3d(path.scale, 0.0, 0.0);
  }
  return path;
}

std::string build_metadata(const ExperimentConfig& config, const PathSpec& path,
                           double unit_factor, double dt, const Vector& noise_base) {
  json meta;
  meta["label"] = config.label;
  meta["robot"] = config.robot.name;
  meta["scheme"] = scheme_name(config.scheme);
  meta["backend"] = backend_name(config.backend);
  meta["unit_factor"] = unit_factor;
  meta["dt"] = dt;
  json p;
  p["kind"] = path_kind_name(path.kind);
  p["center"] = {path.center.x(), path.center.y(), path.center.z()};
  p["scale"] = path.scale;
  p["period"] = path.period;
  p["petal_count"] = path.petal_count;
  p["z_amplitude"] = path.z_amplitude;
  p["waypoints"] = path.waypoints;
  p["total_time"] = path.total_time;
  meta["path"] = p;
  json g;
  g["alpha"] = config.gains.alpha;
  g["beta"] = config.gains.beta;
  g["k1"] = config.gains.k1;
  g["k2"] = config.gains.k2;
  g["fpbm_alpha_weight"] = config.gains.fpbm_alpha_weight;
  meta["gains"] = g;
  json nz;
  nz["kind"] = noise_kind_name(config.noise_kind);
  nz["seed"] = config.noise_seed;
  nz["base"] = std::vector<double>(noise_base.data(),
                                   noise_base.data() + noise_base.size());
  meta["noise"] = nz;
  meta["initial_q"] = std::vector<double>(config.initial_q.data(),
                                          config.initial_q.data() +
                                              config.initial_q.size());
  return meta.dump();
}

}  // namespace

ExperimentRecord run_series(const SeriesRun& in, NoiseSampler& sampler,
                            GiBackend& backend) {
  ExperimentRecord rec;
  const int m = in.robot.task_dim();
  const int pos_rows = in.robot.position_rows();
  const Eigen::Index n_wp = in.series.count();
  if (n_wp < 1) {
    throw InvalidInputError("run_series: empty waypoint series");
  }
  const double dt = n_wp >= 2
                        ? in.series.times(1) - in.series.times(0)
                        : in.series.spec.total_time / static_cast<double>(n_wp);
  const double to_mm = 1000.0 / in.unit_factor;
  const bool velocity_level = scheme_is_velocity_level(in.scheme);

  rec.times.resize(n_wp);
  rec.errors_mm.resize(n_wp);
  rec.desired_positions.resize(n_wp, 3);
  rec.achieved_positions.resize(n_wp, 3);

  SchemeState state;
  state.t = 0.0;
  state.q = in.initial_q;
  state.qdot = Vector::Zero(in.robot.dof());
  state.qddot = Vector::Zero(in.robot.dof());

  // Acceleration-level schemes have no velocity feedback; start with the
  // joint rates that realize the first desired task rate.
  if (!velocity_level && n_wp > 0) {
    Vector rate0 = Vector::Zero(m);
    rate0.head(pos_rows) = in.series.rates.row(0).head(pos_rows).transpose();
    try {
      state.qdot = backend.apply(geometric_jacobian(in.robot, state.q).mat) * rate0;
    } catch (const Error&) {
      // fall back to rest; the run will record whatever tracking results
    }
  }

  Vector integral_acc = Vector::Zero(m);

  Vector desired_pose(m), desired_rate(m), desired_accel(m);
  desired_pose.setZero();
  desired_rate.setZero();
  desired_accel.setZero();
  if (m == 6) desired_pose.tail<3>() = in.desired_rpy;

  for (Eigen::Index k = 0; k < n_wp; ++k) {
    rec.times(k) = in.series.times(k);
    rec.desired_positions.row(k) = in.series.positions.row(k);

    if (!state.q.allFinite() || !state.qdot.allFinite()) {
      rec.diverged = true;
      rec.divergence_reason = "non-finite joint state";
      break;
    }

    Vector achieved;
    Matrix j;
    try {
      achieved = task_pose(in.robot, state.q);
      j = geometric_jacobian(in.robot, state.q).mat;
    } catch (const SingularityError& e) {
      rec.diverged = true;
      rec.divergence_reason = e.what();
      break;
    }

    const Pose fk = forward_kinematics(in.robot.dh, state.q);
    rec.achieved_positions.row(k) = fk.position.transpose();

    desired_pose.head(pos_rows) =
        in.series.positions.row(k).head(pos_rows).transpose();
    desired_rate.head(pos_rows) = in.series.rates.row(k).head(pos_rows).transpose();
    desired_accel.head(pos_rows) =
        in.series.accelerations.row(k).head(pos_rows).transpose();

    const Vector err = pose_error(in.robot, achieved, desired_pose);
    const double err_mm = err.head(pos_rows).norm() * to_mm;
    rec.errors_mm(k) = err_mm;
    rec.completed = k + 1;

    if (!std::isfinite(err_mm) || err_mm > kDivergenceLimitMm) {
      rec.diverged = true;
      rec.divergence_reason = "error exceeded divergence threshold";
      break;
    }

    const Vector delta = sampler.sample(state.t);
    Vector noisy_rate = desired_rate;
    Vector noisy_accel = desired_accel;
    if (velocity_level) {
      noisy_rate.head(delta.size()) += delta;
    } else {
      noisy_accel.head(delta.size()) += delta;
    }

    Vector command;
    try {
      switch (in.scheme) {
        case SchemeId::Mvn:
          command = step_mvn(j, noisy_rate, backend);
          break;
        case SchemeId::Wmvn:
          command = step_wmvn(j, noisy_rate, in.gains.weights, backend);
          break;
        case SchemeId::PidPpp:
          command = step_pid_ppp(j, err, noisy_rate, integral_acc, dt, in.gains,
                                 backend);
          break;
        case SchemeId::SnsV:
          command = step_sns_v(j, noisy_rate, in.qdot_max, backend).command;
          break;
        case SchemeId::Man: {
          const Matrix jdot = jacobian_time_derivative(in.robot, state.q, state.qdot);
          command = step_man(j, jdot, state.qdot, noisy_accel, backend);
          break;
        }
        case SchemeId::Fpbm: {
          const Matrix jdot = jacobian_time_derivative(in.robot, state.q, state.qdot);
          command = step_fpbm(j, jdot, state.qdot, err, desired_rate, noisy_accel,
                              in.gains, backend);
          break;
        }
        case SchemeId::SnsA: {
          const Matrix jdot = jacobian_time_derivative(in.robot, state.q, state.qdot);
          command =
              step_sns_a(j, jdot, state.qdot, noisy_accel, in.qddot_max, backend)
                  .command;
          break;
        }
      }
    } catch (const Error& e) {
      rec.diverged = true;
      rec.divergence_reason = e.what();
      break;
    }

    state = integrate(state, command, dt, velocity_level);
  }

  if (rec.completed > 0) {
    rec.mean_error_mm = rec.errors_mm.head(rec.completed).mean();
    rec.max_error_mm = rec.errors_mm.head(rec.completed).maxCoeff();
  }
  rec.gi_calls = backend.calls();
  return rec;
}

BackendKind backend_from_name(const std::string& name) {
  if (name == "mp") return BackendKind::MP;
  if (name == "uc") return BackendKind::UC;
  if (name == "mx") return BackendKind::MX;
  throw ConfigError("unknown backend: " + name + " (expected mp, uc, or mx)");
}

std::string backend_name(BackendKind kind) {
  switch (kind) {
    case BackendKind::MP: return "mp";
    case BackendKind::UC: return "uc";
    case BackendKind::MX: return "mx";
  }
  return "?";
}

std::string unit_name(double factor) {
  if (factor == 1.0) return "m";
  if (factor == 10.0) return "dm";
  if (factor == 100.0) return "cm";
  if (factor == 1000.0) return "mm";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "x%g", factor);
  return buf;
}

ExperimentRecord run_single(const ExperimentConfig& config, double unit_factor) {
  if (config.initial_q.size() != config.robot.dof()) {
    throw ConfigError("initial_q length does not match robot joint count");
  }
  const double u = unit_factor;

  SeriesRun in;
  in.robot = rescale_units(config.robot, UnitScale{u});
  const PathSpec base_path = resolve_path(config);
  in.series = generate(base_path.scaled(u));
  in.scheme = config.scheme;
  in.unit_factor = u;
  in.initial_q = prismatic_scaled(config.initial_q, config.robot, u);

  in.gains = config.gains;
  Vector weights = config.gains.weights;
  if (weights.size() == 0) weights = Vector::Ones(config.robot.dof());
  // Joint weights carry units: a prismatic rate scales by u, so its weight
  // scales by 1/u^2 to keep the weighted norm invariant.
  in.gains.weights = prismatic_scaled(weights, config.robot, 1.0 / (u * u));

  in.qdot_max = prismatic_scaled(
      limits_or_default(config.limits.qdot_max, config.robot.dof()), config.robot, u);
  in.qddot_max = prismatic_scaled(
      limits_or_default(config.limits.qddot_max, config.robot.dof()), config.robot, u);

  if (config.robot.task == TaskKind::Spatial6) {
    in.desired_rpy = forward_kinematics(in.robot.dh, in.initial_q).rpy;
  }

  Vector noise_base = config.noise_base
                          ? *config.noise_base
                          : default_noise_base(config.robot.position_rows(),
                                               scheme_is_velocity_level(config.scheme)
                                                   ? NoiseLevel::Velocity
                                                   : NoiseLevel::Acceleration);
  NoiseModel noise;
  noise.kind = config.noise_kind;
  noise.base = noise_base;
  noise.unit_factor = u;
  noise.seed = config.noise_seed;
  noise.level = scheme_is_velocity_level(config.scheme) ? NoiseLevel::Velocity
                                                        : NoiseLevel::Acceleration;
  NoiseSampler sampler(noise);

  GiBackend backend = make_backend(config.backend, in.robot);

  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord rec = run_series(in, sampler, backend);
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  rec.label = config.label;
  rec.scheme = config.scheme;
  rec.backend = config.backend;
  rec.path = config.path.kind;
  rec.noise = config.noise_kind;
  rec.unit_factor = u;
  rec.seed = config.noise_seed;
  rec.metadata_json = build_metadata(
      config, base_path, u,
      base_path.total_time / static_cast<double>(base_path.waypoints), noise_base);
  return rec;
}

void evaluate_consistency(RunGroup& group) {
  group.consistent = true;
  group.worst_relative_deviation = 0.0;
  if (group.records.size() < 2) return;
  const ExperimentRecord& ref = group.records.front();
  for (size_t r = 1; r < group.records.size(); ++r) {
    const ExperimentRecord& other = group.records[r];
    if (other.completed != ref.completed || other.diverged != ref.diverged) {
      group.consistent = false;
      group.worst_relative_deviation = std::numeric_limits<double>::infinity();
      continue;
    }
    for (Eigen::Index k = 0; k < ref.completed; ++k) {
      const double a = ref.errors_mm(k);
      const double b = other.errors_mm(k);
      const double tol =
          kConsistencyRelTol * std::max(std::abs(a), std::abs(b)) +
          kConsistencyFloorMm;
      const double utilization = std::abs(a - b) / tol;
      group.worst_relative_deviation =
          std::max(group.worst_relative_deviation, utilization * kConsistencyRelTol);
      if (std::abs(a - b) > tol) group.consistent = false;
    }
  }
}

RunGroup run(const ExperimentConfig& config) {
  if (config.unit_factors.empty()) {
    throw ConfigError("config has no unit factors");
  }
  RunGroup group;
  group.config = config;
  for (double u : config.unit_factors) {
    group.records.push_back(run_single(config, u));
  }
  evaluate_consistency(group);
  return group;
}

MatrixResult run_matrix(const std::vector<ExperimentConfig>& configs, int jobs) {
  if (configs.empty()) {
    throw ConfigError("run_matrix: empty config list");
  }
  struct Cell {
    size_t config_index;
    size_t unit_index;
  };
  std::vector<Cell> cells;
  for (size_t c = 0; c < configs.size(); ++c) {
    if (configs[c].unit_factors.empty()) {
      throw ConfigError("run_matrix: config '" + configs[c].label +
                        "' has no unit factors");
    }
    for (size_t ui = 0; ui < configs[c].unit_factors.size(); ++ui) {
      cells.push_back({c, ui});
    }
  }

  MatrixResult result;
  result.groups.resize(configs.size());
  for (size_t c = 0; c < configs.size(); ++c) {
    result.groups[c].config = configs[c];
    result.groups[c].records.resize(configs[c].unit_factors.size());
  }

  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
  }
  jobs = std::min<int>(jobs, static_cast<int>(cells.size()));

  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      try {
        result.groups[cell.config_index].records[cell.unit_index] = run_single(
            configs[cell.config_index],
            configs[cell.config_index].unit_factors[cell.unit_index]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  for (RunGroup& group : result.groups) {
    evaluate_consistency(group);
    if (!group.consistent) result.all_consistent = false;
    for (const ExperimentRecord& rec : group.records) {
      if (rec.diverged) result.any_divergence = true;
    }
  }
  return result;
}

std::string record_stem(const ExperimentRecord& record) {
  return record.label + "_" + unit_name(record.unit_factor);
}

void write_run_csv(const ExperimentRecord& record, std::ostream& os) {
  os << "t,err_mm,x,y,z,xd,yd,zd\n";
  char buf[64];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf << sep;
  };
  for (Eigen::Index k = 0; k < record.completed; ++k) {
    put(record.times(k), ',');
    put(record.errors_mm(k), ',');
    for (int j = 0; j < 3; ++j) put(record.achieved_positions(k, j), ',');
    for (int j = 0; j < 2; ++j) put(record.desired_positions(k, j), ',');
    put(record.desired_positions(k, 2), '\n');
  }
}

void write_summary_csv(const MatrixResult& result, std::ostream& os) {
  os << "label,robot,path,noise,scheme,backend,"
        "mean_mm_m,mean_mm_dm,mean_mm_cm,mean_mm_mm,gi_calls,consistent\n";
  char buf[64];
  const auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  for (const RunGroup& group : result.groups) {
    std::string cols[4];
    const long gi_calls =
        group.records.empty() ? 0 : group.records.front().gi_calls;
    for (const ExperimentRecord& rec : group.records) {
      std::string cell = rec.diverged ? "WC" : fmt(rec.mean_error_mm);
      if (rec.unit_factor == 1.0) cols[0] = cell;
      else if (rec.unit_factor == 10.0) cols[1] = cell;
      else if (rec.unit_factor == 100.0) cols[2] = cell;
      else if (rec.unit_factor == 1000.0) cols[3] = cell;
    }
    os << group.config.label << ',' << group.config.robot.name << ','
       << path_kind_name(group.config.path.kind) << ','
       << noise_kind_name(group.config.noise_kind) << ','
       << scheme_name(group.config.scheme) << ','
       << backend_name(group.config.backend) << ',' << cols[0] << ',' << cols[1]
       << ',' << cols[2] << ',' << cols[3] << ',' << gi_calls << ','
       << (group.consistent ? "yes" : "no") << '\n';
  }
}

void write_consistency_report(const MatrixResult& result, std::ostream& os) {
  int consistent = 0;
  for (const RunGroup& group : result.groups) {
    os << (group.consistent ? "[CONSISTENT]   " : "[INCONSISTENT] ")
       << group.config.robot.name << ' '
       << path_kind_name(group.config.path.kind) << ' '
       << noise_kind_name(group.config.noise_kind) << ' '
       << scheme_name(group.config.scheme) << '/'
       << backend_name(group.config.backend) << " units=";
    for (size_t i = 0; i < group.config.unit_factors.size(); ++i) {
      os << (i ? "," : "") << unit_name(group.config.unit_factors[i]);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", group.worst_relative_deviation);
    os << " worst_rel_dev=" << buf;
    bool diverged = false;
    for (const ExperimentRecord& rec : group.records) diverged |= rec.diverged;
    if (diverged) os << " [diverged]";
    os << '\n';
    if (group.consistent) ++consistent;
  }
  os << consistent << "/" << result.groups.size() << " groups consistent\n";
}

}  // namespace ucplan
