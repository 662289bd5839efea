#include "ucplan/trajectories.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace ucplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(const PathSpec& spec) {
  if (!(spec.scale > 0.0)) throw ConfigError("path: scale must be positive");
  if (spec.waypoints < 2) throw ConfigError("path: need at least 2 waypoints");
  if (!(spec.total_time > 0.0)) throw ConfigError("path: total_time must be positive");
  if (!(spec.period > 0.0)) throw ConfigError("path: period must be positive");
  const double laps = spec.total_time / spec.period;
  if (std::abs(laps - std::round(laps)) > 1e-9) {
    throw ConfigError("path: total_time must be an integer number of periods");
  }
  if (spec.kind == PathKind::Rhodonea || spec.kind == PathKind::Rhodonea3d) {
    if (spec.petal_count < 1) throw ConfigError("path: petal_count must be >= 1");
  }
}

double z_amp(const PathSpec& spec) {
  return spec.z_amplitude > 0.0 ? spec.z_amplitude : spec.scale / 4.0;
}

// Highest angular harmonic of the curve, in multiples of 2*pi/period.
// Bounds the third/fourth time derivatives for the finite-difference check.
int max_harmonic(const PathSpec& spec) {
  switch (spec.kind) {
    case PathKind::Circle:
      return 1;
    case PathKind::Rhodonea:
    case PathKind::Rhodonea3d:
      return spec.petal_count + 1;
    case PathKind::Tricuspid:
    case PathKind::BentTricuspid:
    case PathKind::InterlacedCircle:
      return 2;
  }
  return 1;
}

}  // namespace

PathKind path_kind_from_name(const std::string& name) {
  if (name == "circle") return PathKind::Circle;
  if (name == "rhodonea") return PathKind::Rhodonea;
  if (name == "tricuspid") return PathKind::Tricuspid;
  if (name == "interlaced_circle") return PathKind::InterlacedCircle;
  if (name == "rhodonea_3d") return PathKind::Rhodonea3d;
  if (name == "bent_tricuspid") return PathKind::BentTricuspid;
  throw ConfigError("unknown path kind: " + name);
}

std::string path_kind_name(PathKind kind) {
  switch (kind) {
    case PathKind::Circle: return "circle";
    case PathKind::Rhodonea: return "rhodonea";
    case PathKind::Tricuspid: return "tricuspid";
    case PathKind::InterlacedCircle: return "interlaced_circle";
    case PathKind::Rhodonea3d: return "rhodonea_3d";
    case PathKind::BentTricuspid: return "bent_tricuspid";
  }
  return "?";
}

bool path_kind_is_3d(PathKind kind) {
  return kind == PathKind::InterlacedCircle || kind == PathKind::Rhodonea3d ||
         kind == PathKind::BentTricuspid;
}

PathSpec PathSpec::scaled(double k) const {
  PathSpec out = *this;
  out.center *= k;
  out.scale *= k;
  out.z_amplitude = z_amp(*this) * k;
  return out;
}

void evaluate_path(const PathSpec& spec, double t, Eigen::Vector3d* position,
                   Eigen::Vector3d* rate, Eigen::Vector3d* acceleration) {
  const double w = kTwoPi / spec.period;
  const double th = w * t;
  const double s = spec.scale;

  double x = 0, y = 0, xd = 0, yd = 0, xdd = 0, ydd = 0;
  switch (spec.kind) {
    case PathKind::Circle:
    case PathKind::InterlacedCircle: {
      x = s * std::cos(th);
      y = s * std::sin(th);
      xd = -s * w * std::sin(th);
      yd = s * w * std::cos(th);
      xdd = -s * w * w * std::cos(th);
      ydd = -s * w * w * std::sin(th);
      break;
    }
    case PathKind::Rhodonea:
    case PathKind::Rhodonea3d: {
      const double k = spec.petal_count;
      const double ck = std::cos(k * th), sk = std::sin(k * th);
      const double c = std::cos(th), sn = std::sin(th);
      x = s * ck * c;
      y = s * ck * sn;
      xd = -s * w * (k * sk * c + ck * sn);
      yd = s * w * (ck * c - k * sk * sn);
      xdd = -s * w * w * ((k * k + 1.0) * ck * c - 2.0 * k * sk * sn);
      ydd = -s * w * w * ((k * k + 1.0) * ck * sn + 2.0 * k * sk * c);
      break;
    }
    case PathKind::Tricuspid:
    case PathKind::BentTricuspid: {
      const double c = s / 3.0;  // deltoid circumradius = 3c
      x = 2.0 * c * std::cos(th) + c * std::cos(2.0 * th);
      y = 2.0 * c * std::sin(th) - c * std::sin(2.0 * th);
      xd = w * (-2.0 * c * std::sin(th) - 2.0 * c * std::sin(2.0 * th));
      yd = w * (2.0 * c * std::cos(th) - 2.0 * c * std::cos(2.0 * th));
      xdd = w * w * (-2.0 * c * std::cos(th) - 4.0 * c * std::cos(2.0 * th));
      ydd = w * w * (-2.0 * c * std::sin(th) + 4.0 * c * std::sin(2.0 * th));
      break;
    }
  }

  double z = 0, zd = 0, zdd = 0;
  if (path_kind_is_3d(spec.kind)) {
    const double h = z_amp(spec);
    const double a = spec.kind == PathKind::InterlacedCircle ? 2.0 : 1.0;
    z = h * std::sin(a * th);
    zd = h * a * w * std::cos(a * th);
    zdd = -h * a * a * w * w * std::sin(a * th);
  }

  if (position) *position = spec.center + Eigen::Vector3d(x, y, z);
  if (rate) *rate = Eigen::Vector3d(xd, yd, zd);
  if (acceleration) *acceleration = Eigen::Vector3d(xdd, ydd, zdd);
}

WaypointSeries generate(const PathSpec& spec) {
  validate(spec);
  WaypointSeries out;
  out.spec = spec;
  const Eigen::Index n = spec.waypoints;
  const double dt = spec.total_time / static_cast<double>(n);
  out.times.resize(n);
  out.positions.resize(n, 3);
  out.rates.resize(n, 3);
  out.accelerations.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    Eigen::Vector3d p, v, a;
    evaluate_path(spec, t, &p, &v, &a);
    out.times(i) = t;
    out.positions.row(i) = p.transpose();
    out.rates.row(i) = v.transpose();
    out.accelerations.row(i) = a.transpose();
  }
  return out;
}

DerivativeReport derivative_check(const WaypointSeries& series) {
  DerivativeReport report;
  const Eigen::Index n = series.count();
  if (n < 3) {
    report.pass = false;
    return report;
  }
  const double dt = series.times(1) - series.times(0);
  const double w = kTwoPi / series.spec.period;
  const double kw = max_harmonic(series.spec) * w;
  const double amp = series.spec.scale + z_amp(series.spec);
  // Central-difference truncation bounds |f'''| dt^2 / 6 and |f''''| dt^2 / 6,
  // with 10x headroom.
  report.rate_tolerance = 10.0 * amp * kw * kw * kw * dt * dt / 6.0;
  report.accel_tolerance = 10.0 * amp * kw * kw * kw * kw * dt * dt / 6.0;

  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const Eigen::Vector3d fd_rate =
        (series.positions.row(i + 1) - series.positions.row(i - 1)).transpose() /
        (2.0 * dt);
    const Eigen::Vector3d fd_accel =
        (series.rates.row(i + 1) - series.rates.row(i - 1)).transpose() /
        (2.0 * dt);
    report.max_rate_deviation = std::max(
        report.max_rate_deviation,
        (fd_rate - series.rates.row(i).transpose()).cwiseAbs().maxCoeff());
    report.max_accel_deviation =
        std::max(report.max_accel_deviation,
                 (fd_accel - series.accelerations.row(i).transpose())
                     .cwiseAbs()
                     .maxCoeff());
  }
  report.pass = report.max_rate_deviation <= report.rate_tolerance &&
                report.max_accel_deviation <= report.accel_tolerance;
  return report;
}

void write_waypoints_csv(const WaypointSeries& series, std::ostream& os) {
  os << "t,x,y,z,xd,yd,zd,xdd,ydd,zdd\n";
  char buf[64];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf << sep;
  };
  for (Eigen::Index i = 0; i < series.count(); ++i) {
    put(series.times(i), ',');
    for (int j = 0; j < 3; ++j) put(series.positions(i, j), ',');
    for (int j = 0; j < 3; ++j) put(series.rates(i, j), ',');
    for (int j = 0; j < 2; ++j) put(series.accelerations(i, j), ',');
    put(series.accelerations(i, 2), '\n');
  }
}

}  // namespace ucplan
