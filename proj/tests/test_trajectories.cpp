#include "ucplan/trajectories.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace {

using ucplan::PathKind;
using ucplan::PathSpec;
using ucplan::WaypointSeries;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PathSpec spec_for(PathKind kind, int waypoints = 2000) {
  PathSpec spec;
  spec.kind = kind;
  spec.center = {0.8, 1.6, 0.1};
  spec.scale = 0.2;
  spec.period = 10.0;
  spec.total_time = 10.0;
  spec.waypoints = waypoints;
  spec.petal_count = 3;
  return spec;
}

const PathKind kAllKinds[] = {PathKind::Circle,          PathKind::Rhodonea,
                              PathKind::Tricuspid,       PathKind::InterlacedCircle,
                              PathKind::Rhodonea3d,      PathKind::BentTricuspid};

TEST(Generate, CircleStartsAtPhaseZeroPoint) {
  const WaypointSeries s = ucplan::generate(spec_for(PathKind::Circle));
  EXPECT_NEAR(s.positions(0, 0), 0.8 + 0.2, 1e-12);
  EXPECT_NEAR(s.positions(0, 1), 1.6, 1e-12);
}

TEST(Generate, CircleSpeedIsConstant) {
  const PathSpec spec = spec_for(PathKind::Circle);
  const WaypointSeries s = ucplan::generate(spec);
  const double expected = spec.scale * kTwoPi / spec.period;
  for (Eigen::Index i = 0; i < s.count(); ++i) {
    EXPECT_NEAR(s.rates.row(i).norm(), expected, 1e-12);
  }
}

TEST(Generate, RhodoneaPetalCountFromRadiusZeroCrossings) {
  const PathSpec spec = spec_for(PathKind::Rhodonea, 20000);
  const WaypointSeries s = ucplan::generate(spec);
  // r(theta) = scale * cos(k theta) crosses zero 2k times per revolution.
  int crossings = 0;
  double prev = spec.scale;  // r at theta = 0
  for (Eigen::Index i = 1; i < s.count(); ++i) {
    const double theta = kTwoPi * s.times(i) / spec.period;
    const double r = spec.scale * std::cos(spec.petal_count * theta);
    if ((r > 0) != (prev > 0)) ++crossings;
    prev = r;
  }
  EXPECT_EQ(crossings, 2 * spec.petal_count);
}

TEST(Generate, ClosedCurvesReturnToStart) {
  for (PathKind kind : kAllKinds) {
    const PathSpec spec = spec_for(kind);
    Eigen::Vector3d start, end;
    ucplan::evaluate_path(spec, 0.0, &start, nullptr, nullptr);
    ucplan::evaluate_path(spec, spec.total_time, &end, nullptr, nullptr);
    EXPECT_LT((end - start).norm(), 1e-9 * spec.scale) << ucplan::path_kind_name(kind);
  }
}

TEST(Generate, ThreeDimensionalKindsMoveInZ) {
  for (PathKind kind : kAllKinds) {
    const WaypointSeries s = ucplan::generate(spec_for(kind));
    const double z_span =
        s.positions.col(2).maxCoeff() - s.positions.col(2).minCoeff();
    if (ucplan::path_kind_is_3d(kind)) {
      EXPECT_GT(z_span, 1e-3) << ucplan::path_kind_name(kind);
    } else {
      EXPECT_EQ(z_span, 0.0) << ucplan::path_kind_name(kind);
    }
  }
}

TEST(Generate, UnitScalingIsHomogeneous) {
  for (PathKind kind : kAllKinds) {
    const PathSpec base = spec_for(kind, 500);
    const PathSpec scaled = base.scaled(1000.0);
    const WaypointSeries sb = ucplan::generate(base);
    const WaypointSeries ss = ucplan::generate(scaled);
    const double dev =
        (ss.positions - 1000.0 * sb.positions).cwiseAbs().maxCoeff();
    EXPECT_LT(dev, 1e-9 * 1000.0 * base.scale) << ucplan::path_kind_name(kind);
    const double rate_dev = (ss.rates - 1000.0 * sb.rates).cwiseAbs().maxCoeff();
    EXPECT_LT(rate_dev, 1e-9 * 1000.0) << ucplan::path_kind_name(kind);
  }
}

TEST(Generate, RejectsBadSpecs) {
  PathSpec spec = spec_for(PathKind::Circle);
  spec.waypoints = 1;
  EXPECT_THROW(ucplan::generate(spec), ucplan::ConfigError);
  spec = spec_for(PathKind::Circle);
  spec.scale = 0.0;
  EXPECT_THROW(ucplan::generate(spec), ucplan::ConfigError);
  spec = spec_for(PathKind::Circle);
  spec.total_time = 10.0;
  spec.period = 3.0;  // 10/3 laps never closes
  EXPECT_THROW(ucplan::generate(spec), ucplan::ConfigError);
}

TEST(DerivativeCheck, PassesOnEveryKind) {
  for (PathKind kind : kAllKinds) {
    const WaypointSeries s = ucplan::generate(spec_for(kind, 7000));
    const ucplan::DerivativeReport report = ucplan::derivative_check(s);
    EXPECT_TRUE(report.pass) << ucplan::path_kind_name(kind)
                             << " rate dev " << report.max_rate_deviation
                             << " tol " << report.rate_tolerance;
  }
}

TEST(DerivativeCheck, CircleMatchesClosedFormAtReferenceSampling) {
  PathSpec spec = spec_for(PathKind::Circle, 7000);
  const WaypointSeries s = ucplan::generate(spec);
  const ucplan::DerivativeReport report = ucplan::derivative_check(s);
  EXPECT_TRUE(report.pass);
  EXPECT_LT(report.max_rate_deviation, 1e-6);
}

TEST(DerivativeCheck, FailsWhenRatesZeroed) {
  WaypointSeries s = ucplan::generate(spec_for(PathKind::Circle, 2000));
  s.rates.setZero();
  const ucplan::DerivativeReport report = ucplan::derivative_check(s);
  EXPECT_FALSE(report.pass);
  EXPECT_GT(report.max_rate_deviation, report.rate_tolerance);
}

TEST(WaypointCsv, HeaderAndRowCount) {
  const WaypointSeries s = ucplan::generate(spec_for(PathKind::Circle, 50));
  std::ostringstream os;
  ucplan::write_waypoints_csv(s, os);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("t,x,y,z,xd,yd,zd,xdd,ydd,zdd\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 51);
}

}  // namespace
