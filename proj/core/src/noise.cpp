#include "ucplan/noise.hpp"

#include <cmath>

namespace ucplan {

NoiseKind noise_kind_from_name(const std::string& name) {
  if (name == "zero") return NoiseKind::Zero;
  if (name == "constant") return NoiseKind::Constant;
  if (name == "time_varying") return NoiseKind::TimeVarying;
  if (name == "random") return NoiseKind::Random;
  throw ConfigError("unknown noise kind: " + name);
}

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Zero: return "zero";
    case NoiseKind::Constant: return "constant";
    case NoiseKind::TimeVarying: return "time_varying";
    case NoiseKind::Random: return "random";
  }
  return "?";
}

Eigen::VectorXd default_noise_base(int components, NoiseLevel level) {
  Eigen::VectorXd base(components);
  for (int i = 0; i < components; ++i) base(i) = (i % 2 == 0) ? 0.3 : 0.5;
  if (level == NoiseLevel::Acceleration) base *= 0.1;
  return base;
}

NoiseSampler::NoiseSampler(NoiseModel model)
    : model_(std::move(model)), stream_(model_.seed) {
  if (model_.base.size() < 1) {
    throw InvalidInputError("NoiseSampler: base vector must be non-empty");
  }
  if (!(model_.unit_factor > 0.0)) {
    throw InvalidInputError("NoiseSampler: unit factor must be positive");
  }
}

Eigen::VectorXd NoiseSampler::sample(double t) {
  const Eigen::Index m = model_.base.size();
  const double u = model_.unit_factor;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  switch (model_.kind) {
    case NoiseKind::Zero:
      break;
    case NoiseKind::Constant:
      out = u * model_.base;
      break;
    case NoiseKind::TimeVarying:
      for (Eigen::Index i = 0; i < m; ++i) {
        const double f = (i % 2 == 0) ? std::sin(2.0 * t) : std::cos(2.0 * t);
        out(i) = u * model_.base(i) * f;
      }
      break;
    case NoiseKind::Random:
      for (Eigen::Index i = 0; i < m; ++i) out(i) = u * stream_.next_unit();
      break;
  }
  return out;
}

}  // namespace ucplan
