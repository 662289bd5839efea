#include <benchmark/benchmark.h>

#include <random>

#include "ucplan/gi.hpp"
#include "ucplan/kinematics.hpp"

namespace {

using ucplan::Matrix;
using ucplan::Vector;

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

void BM_Svd(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucplan::svd(a));
  }
}
BENCHMARK(BM_Svd)->Args({2, 3})->Args({6, 7});

void BM_ScalingDecomposition(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucplan::scaling_decomposition(a));
  }
}
BENCHMARK(BM_ScalingDecomposition)->Args({2, 3})->Args({6, 7});

void BM_MpInverse(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucplan::mp_inverse(a));
  }
}
BENCHMARK(BM_MpInverse)->Args({2, 3})->Args({6, 7});

void BM_UcInverse(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucplan::uc_inverse(a));
  }
}
BENCHMARK(BM_UcInverse)->Args({2, 3})->Args({6, 7});

void BM_MxInverseThreeDof(benchmark::State& state) {
  const ucplan::RobotModel robot = ucplan::presets::three_dof_2rp();
  Vector q(3);
  q << 0.5, 0.5, -0.7;
  const Matrix j = ucplan::geometric_jacobian(robot, q).mat;
  const ucplan::PartitionSpec spec = ucplan::partition_rule(robot);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucplan::mx_inverse(j, spec));
  }
}
BENCHMARK(BM_MxInverseThreeDof);

void BM_MxInverseSevenDof(benchmark::State& state) {
  const ucplan::RobotModel robot = ucplan::presets::seven_dof_2rp4r();
  Vector q(7);
  q << 0.2, 0.3, -0.35, 1.0, 0.8, 0.5, 0.3;
  const Matrix j = ucplan::geometric_jacobian(robot, q).mat;
  const ucplan::PartitionSpec spec = ucplan::partition_rule(robot);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucplan::mx_inverse(j, spec));
  }
}
BENCHMARK(BM_MxInverseSevenDof);

}  // namespace

BENCHMARK_MAIN();
