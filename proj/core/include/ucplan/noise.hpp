#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "ucplan/error.hpp"

namespace ucplan {

enum class NoiseKind { Zero, Constant, TimeVarying, Random };
enum class NoiseLevel { Velocity, Acceleration };

NoiseKind noise_kind_from_name(const std::string& name);
std::string noise_kind_name(NoiseKind kind);

struct NoiseModel {
  NoiseKind kind = NoiseKind::Zero;
  Eigen::VectorXd base;       // per-component amplitude (unused for Random)
  double unit_factor = 1.0;   // u in {1, 10, 100, 1000}
  std::uint64_t seed = 0;     // Random kind
  NoiseLevel level = NoiseLevel::Velocity;
};

/// Reference bases: [0.3, 0.5] / [0.3, 0.5, 0.3] at velocity level, 10x
/// smaller at acceleration level.
Eigen::VectorXd default_noise_base(int components, NoiseLevel level);

/// splitmix64; bit-reproducible across platforms. Draws map the top 53 bits
/// to [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Stateful sampler: the Random kind draws base.size() fresh uniforms per
/// call from a SplitMix64 stream, so the sequence depends on call order,
/// not on t. One sampler per run; never shared between runs.
class NoiseSampler {
 public:
  explicit NoiseSampler(NoiseModel model);

  Eigen::VectorXd sample(double t);

  const NoiseModel& model() const { return model_; }

 private:
  NoiseModel model_;
  SplitMix64 stream_;
};

}  // namespace ucplan
