#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sphrobin {

/// Seeded generator with platform-independent uniform draws (the standard
/// distributions are implementation-defined, which would break output
/// determinism across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform point on the geodesic cap of angular radius `alpha` about `center`.
  Eigen::Vector3d point_in_cap(const Eigen::Vector3d& center, double alpha);

  Eigen::Vector3d point_on_sphere() { return point_in_cap(Eigen::Vector3d::UnitZ(), M_PI); }

 private:
  std::mt19937_64 engine_;
};

inline Eigen::Vector3d Rng::point_in_cap(const Eigen::Vector3d& center, double alpha) {
  const double z = 1.0 - (1.0 - std::cos(alpha)) * uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double azimuth = 2.0 * M_PI * uniform();
  const Eigen::Vector3d axis =
      std::abs(center.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d u = axis.cross(center).normalized();
  const Eigen::Vector3d v = center.cross(u);
  return (z * center + r * (std::cos(azimuth) * u + std::sin(azimuth) * v)).normalized();
}

}  // namespace sphrobin
