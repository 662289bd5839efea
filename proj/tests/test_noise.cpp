#include "ucplan/noise.hpp"

#include <gtest/gtest.h>

namespace {

using ucplan::NoiseKind;
using ucplan::NoiseModel;
using ucplan::NoiseSampler;

NoiseModel model(NoiseKind kind, double u, std::uint64_t seed = 42) {
  NoiseModel m;
  m.kind = kind;
  m.base = Eigen::Vector2d(0.3, 0.5);
  m.unit_factor = u;
  m.seed = seed;
  return m;
}

TEST(Noise, ZeroKind) {
  NoiseSampler s(model(NoiseKind::Zero, 1000.0));
  EXPECT_EQ(s.sample(0.0).norm(), 0.0);
  EXPECT_EQ(s.sample(3.7).norm(), 0.0);
}

TEST(Noise, ConstantAtMillimeterUnits) {
  NoiseSampler s(model(NoiseKind::Constant, 1000.0));
  const Eigen::VectorXd v = s.sample(12.3);
  EXPECT_DOUBLE_EQ(v(0), 300.0);
  EXPECT_DOUBLE_EQ(v(1), 500.0);
}

TEST(Noise, TimeVaryingAlternatesSinCos) {
  NoiseSampler s(model(NoiseKind::TimeVarying, 1.0));
  const Eigen::VectorXd v0 = s.sample(0.0);
  EXPECT_DOUBLE_EQ(v0(0), 0.0);   // 0.3 * sin(0)
  EXPECT_DOUBLE_EQ(v0(1), 0.5);   // 0.5 * cos(0)
  const double t = 0.9;
  const Eigen::VectorXd v = s.sample(t);
  EXPECT_DOUBLE_EQ(v(0), 0.3 * std::sin(2.0 * t));
  EXPECT_DOUBLE_EQ(v(1), 0.5 * std::cos(2.0 * t));
}

TEST(Noise, ThreeComponentTimeVaryingPattern) {
  NoiseModel m = model(NoiseKind::TimeVarying, 1.0);
  m.base = Eigen::Vector3d(0.3, 0.5, 0.3);
  NoiseSampler s(m);
  const double t = 1.4;
  const Eigen::VectorXd v = s.sample(t);
  EXPECT_DOUBLE_EQ(v(0), 0.3 * std::sin(2.0 * t));
  EXPECT_DOUBLE_EQ(v(1), 0.5 * std::cos(2.0 * t));
  EXPECT_DOUBLE_EQ(v(2), 0.3 * std::sin(2.0 * t));
}

TEST(Noise, RandomDrawsAreInUnitIntervalTimesFactor) {
  NoiseSampler s(model(NoiseKind::Random, 100.0));
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd v = s.sample(0.1 * i);
    for (Eigen::Index c = 0; c < v.size(); ++c) {
      EXPECT_GE(v(c), 0.0);
      EXPECT_LT(v(c), 100.0);
    }
  }
}

TEST(Noise, EqualSeedsGiveIdenticalStreams) {
  NoiseSampler a(model(NoiseKind::Random, 1.0, 7));
  NoiseSampler b(model(NoiseKind::Random, 1.0, 7));
  for (int i = 0; i < 200; ++i) {
    const double t = 0.05 * i;
    EXPECT_EQ(a.sample(t), b.sample(t));
  }
  NoiseSampler c(model(NoiseKind::Random, 1.0, 8));
  EXPECT_NE(a.sample(0.0), c.sample(0.0));
}

TEST(Noise, UnitFactorScalesEveryKindExactly) {
  for (NoiseKind kind : {NoiseKind::Constant, NoiseKind::TimeVarying,
                         NoiseKind::Random}) {
    NoiseSampler base(model(kind, 1.0, 31));
    NoiseSampler scaled(model(kind, 1000.0, 31));
    for (int i = 0; i < 100; ++i) {
      const double t = 0.07 * i;
      const Eigen::VectorXd v1 = base.sample(t);
      const Eigen::VectorXd vu = scaled.sample(t);
      for (Eigen::Index c = 0; c < v1.size(); ++c) {
        EXPECT_DOUBLE_EQ(vu(c), 1000.0 * v1(c));
      }
    }
  }
}

TEST(Noise, DefaultBasesMatchLevel) {
  const Eigen::VectorXd v2 =
      ucplan::default_noise_base(2, ucplan::NoiseLevel::Velocity);
  EXPECT_DOUBLE_EQ(v2(0), 0.3);
  EXPECT_DOUBLE_EQ(v2(1), 0.5);
  const Eigen::VectorXd a3 =
      ucplan::default_noise_base(3, ucplan::NoiseLevel::Acceleration);
  EXPECT_DOUBLE_EQ(a3(0), 0.03);
  EXPECT_DOUBLE_EQ(a3(1), 0.05);
  EXPECT_DOUBLE_EQ(a3(2), 0.03);
}

}  // namespace
