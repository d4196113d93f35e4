#pragma once

#include <optional>
#include <utility>

#include "labelprop/point_cloud.hpp"
#include "labelprop/rng.hpp"

namespace labelprop {

/// Geometric augmentations, applied in declaration order below. Random draws
/// come from one seeded generator, so a fixed seed fixes the output.
struct AugmentSpec {
  bool center = false;                                     // barycenter to origin
  std::optional<double> rotation_z;                        // fixed angle, radians
  bool random_rotation_z = false;                          // uniform [0, 2*pi)
  std::optional<double> scale;                             // fixed factor
  std::optional<std::pair<double, double>> random_scale;   // uniform in range
  double noise_sigma = 0.0;                                // gaussian, per axis
  bool flip_x = false;                                     // x -> -x
  bool flip_y = false;                                     // y -> -y
  bool random_flip_x = false;                              // p = 0.5
  bool random_flip_y = false;                              // p = 0.5
};

inline Vec3 barycenter(const PointCloud& cloud) {
  Vec3 sum;
  for (const auto& p : cloud.points) sum += p;
  const double n = cloud.empty() ? 1.0 : static_cast<double>(cloud.size());
  return sum * (1.0 / n);
}

inline PointCloud augment(const PointCloud& cloud, const AugmentSpec& spec,
                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  PointCloud out = cloud;

  if (spec.center) {
    const Vec3 c = barycenter(out);
    for (auto& p : out.points) p = p - c;
  }

  double angle = spec.rotation_z.value_or(0.0);
  if (spec.random_rotation_z) angle += uniform_in(gen, 0.0, 6.283185307179586);
  if (angle != 0.0) {
    const Mat3 rot = Mat3::rotation_z(angle);
    for (auto& p : out.points) p = rot * p;
  }

  double factor = spec.scale.value_or(1.0);
  if (spec.random_scale)
    factor *= uniform_in(gen, spec.random_scale->first, spec.random_scale->second);
  if (factor != 1.0)
    for (auto& p : out.points) p = p * factor;

  if (spec.noise_sigma > 0.0)
    for (auto& p : out.points) {
      p.x += gaussian(gen, spec.noise_sigma);
      p.y += gaussian(gen, spec.noise_sigma);
      p.z += gaussian(gen, spec.noise_sigma);
    }

  bool fx = spec.flip_x, fy = spec.flip_y;
  if (spec.random_flip_x) fx ^= (uniform_unit(gen) < 0.5);
  if (spec.random_flip_y) fy ^= (uniform_unit(gen) < 0.5);
  if (fx)
    for (auto& p : out.points) p.x = -p.x;
  if (fy)
    for (auto& p : out.points) p.y = -p.y;

  return out;
}

}  // namespace labelprop
