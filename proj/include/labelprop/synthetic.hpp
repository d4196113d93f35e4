#pragma once

#include <cstdint>
#include <vector>

#include "labelprop/frame.hpp"
#include "labelprop/rng.hpp"
#include "labelprop/segmenter.hpp"
#include "labelprop/semantics.hpp"

namespace labelprop {

/// Synthetic driving-like scene: a ground plane and two walls (static), one
/// box translating along +x (dynamic), a sensor moving through. Objects of
/// different static classes are kept well farther apart than any reasonable
/// propagation radius, and the mover floats clear of the ground, so
/// propagation between classes is geometrically impossible.
struct SyntheticSceneParams {
  int num_frames = 25;
  double ground_extent_x = 24.0;
  double ground_extent_y = 12.0;
  double ground_step = 0.25;
  double wall_step = 0.25;
  double wall_height = 2.5;
  double wall_gap = 1.0;        // lateral clearance between ground and walls
  double mover_size = 1.0;
  double mover_altitude = 1.3;  // bottom face height above the ground
  double mover_speed = 1.0;     // m per frame along +x
  double mover_step = 0.15;
  double sensor_speed = 0.4;
  double jitter = 0.02;
  double sample_probability = 1.0;  // fraction of scene nodes seen per frame
  std::uint64_t seed = 7;
};

struct SyntheticScene {
  LabelSchema schema;  // 0 mover (dynamic) | 1 ground | 2 structure
  std::vector<Frame> frames;                    // sensor coordinates
  std::vector<std::vector<std::int32_t>> truth; // per frame, schema labels
};

namespace detail {

struct SceneNode {
  Vec3 position;
  std::int32_t label;
  bool moving;
};

inline std::vector<SceneNode> scene_nodes(const SyntheticSceneParams& p) {
  std::vector<SceneNode> nodes;
  const double half_y = p.ground_extent_y / 2.0;
  for (double x = 0.0; x <= p.ground_extent_x; x += p.ground_step)
    for (double y = -half_y; y <= half_y; y += p.ground_step)
      nodes.push_back({{x, y, 0.0}, 1, false});
  for (const double wall_y : {half_y + p.wall_gap, -half_y - p.wall_gap})
    for (double x = 0.0; x <= p.ground_extent_x; x += p.wall_step)
      for (double z = 0.0; z <= p.wall_height; z += p.wall_step)
        nodes.push_back({{x, wall_y, z}, 2, false});
  // Mover sampled on all six cube faces, in its local frame around origin.
  if (p.mover_size <= 0.0) return nodes;
  const double h = p.mover_size / 2.0;
  for (double a = -h; a <= h; a += p.mover_step)
    for (double b = -h; b <= h; b += p.mover_step) {
      nodes.push_back({{a, b, -h}, 0, true});
      nodes.push_back({{a, b, h}, 0, true});
      nodes.push_back({{a, -h, b}, 0, true});
      nodes.push_back({{a, h, b}, 0, true});
      nodes.push_back({{-h, a, b}, 0, true});
      nodes.push_back({{h, a, b}, 0, true});
    }
  return nodes;
}

}  // namespace detail

inline SyntheticScene make_synthetic_scene(const SyntheticSceneParams& p) {
  SyntheticScene scene;
  scene.schema.num_labels = 3;
  scene.schema.num_dynamic = 1;
  scene.schema.names = {"mover", "ground", "structure"};

  const auto nodes = detail::scene_nodes(p);
  const double mover_z = p.mover_altitude + p.mover_size / 2.0;

  for (int f = 0; f < p.num_frames; ++f) {
    std::mt19937_64 gen(p.seed * 1000003ull + static_cast<std::uint64_t>(f));
    Pose pose;
    pose.rotation = Mat3::rotation_z(0.01 * f);
    pose.translation = {p.sensor_speed * f, 0.0, 1.5};
    const Pose world_to_sensor = pose.inverse();
    const Vec3 mover_center{2.0 + p.mover_speed * f, 0.0, mover_z};

    Frame frame;
    frame.pose = pose;
    frame.index = f;
    std::vector<std::int32_t> labels;
    for (const auto& node : nodes) {
      if (p.sample_probability < 1.0 && uniform_unit(gen) >= p.sample_probability)
        continue;
      Vec3 world = node.moving ? node.position + mover_center : node.position;
      world.x += uniform_in(gen, -p.jitter, p.jitter);
      world.y += uniform_in(gen, -p.jitter, p.jitter);
      world.z += uniform_in(gen, -p.jitter, p.jitter) * 0.5;
      frame.cloud.points.push_back(world_to_sensor.apply(world));
      labels.push_back(node.label);
    }
    scene.frames.push_back(std::move(frame));
    scene.truth.push_back(std::move(labels));
  }
  return scene;
}

/// Truth provider over a generated scene; the scene must outlive the lookup.
inline TruthLookup make_truth_lookup(const SyntheticScene& scene) {
  return [&scene](const PointOrigin& origin) -> std::int32_t {
    if (origin.frame < 0 ||
        origin.frame >= static_cast<std::int64_t>(scene.truth.size()))
      return kNoLabel;
    const auto& labels = scene.truth[static_cast<std::size_t>(origin.frame)];
    if (origin.point >= labels.size()) return kNoLabel;
    return labels[origin.point];
  };
}

}  // namespace labelprop
