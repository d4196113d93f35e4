#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "labelprop/accumulate.hpp"
#include "labelprop/kmeans.hpp"
#include "labelprop/voxel_grid.hpp"

namespace labelprop {

struct DensifyParams {
  double densify_voxel_size = 2.0;  // V_c
  int num_clusters = 10;            // N_c

  void check() const {
    if (densify_voxel_size <= 0.0)
      throw std::invalid_argument("densify voxel size must be > 0");
    if (num_clusters < 1) throw std::invalid_argument("cluster count must be >= 1");
  }
};

struct VoxelOffset {
  std::int32_t dx, dy, dz;
  bool operator==(const VoxelOffset&) const = default;
};

/// The 3x3x3 sub-voxel rule: a voxel splits into 27 sub-voxels and each
/// sub-voxel names the adjacent voxels it reaches. Per axis, the fractional
/// position inside the voxel contributes -1 in [0,1/3), 0 in [1/3,2/3) and
/// +1 in [2/3,1); the neighborhood is the cartesian product of
/// {contribution, 0} per axis, minus the zero offset. Center sub-voxel: no
/// neighbor; face: 1; edge: 3; corner: 7.
inline std::vector<VoxelOffset> subvoxel_neighborhood(double fx, double fy,
                                                      double fz) {
  auto contribution = [](double f) -> std::int32_t {
    if (f < 1.0 / 3.0) return -1;
    if (f < 2.0 / 3.0) return 0;
    return 1;
  };
  const std::int32_t cx = contribution(fx), cy = contribution(fy),
                     cz = contribution(fz);
  std::vector<VoxelOffset> offsets;
  for (std::int32_t dx : {cx, 0})
    for (std::int32_t dy : {cy, 0})
      for (std::int32_t dz : {cz, 0}) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const VoxelOffset o{dx, dy, dz};
        bool seen = false;
        for (const auto& e : offsets) seen |= (e == o);
        if (!seen) offsets.push_back(o);
      }
  return offsets;
}

/// One segmenter work unit: the un-propagated current points it owns plus
/// the accumulated points fetched as context around them.
struct Cluster {
  std::vector<std::uint32_t> seed_indices;     // into the current frame
  std::vector<std::uint32_t> support_indices;  // into the accumulated cloud
  Vec3 centroid;
};

/// Fetches every accumulated point lying in a voxel occupied by a seed or in
/// one of the seed's sub-voxel neighbor voxels. The V_c grid over the
/// accumulated cloud is built once per frame and shared across clusters.
inline Cluster densify(const PointCloud& current,
                       std::vector<std::uint32_t> seed_indices,
                       const AccumulatedCloud& acc, const VoxelGrid& vc_grid,
                       const DensifyParams& params) {
  params.check();
  const double s = params.densify_voxel_size;
  Cluster cluster;
  cluster.seed_indices = std::move(seed_indices);

  std::vector<bool> in_support(acc.size(), false);
  auto take_cell = [&](const VoxelKey& key) {
    for (std::uint32_t idx : vc_grid.cell(key)) in_support[idx] = true;
  };

  Vec3 sum;
  for (std::uint32_t seed : cluster.seed_indices) {
    const Vec3& p = current.points[seed];
    sum += p;
    const VoxelKey key = voxel_key_of(p, s);
    take_cell(key);
    const double fx = p.x / s - key.x;
    const double fy = p.y / s - key.y;
    const double fz = p.z / s - key.z;
    for (const VoxelOffset& o : subvoxel_neighborhood(fx, fy, fz))
      take_cell({key.x + o.dx, key.y + o.dy, key.z + o.dz});
  }
  for (std::uint32_t i = 0; i < acc.size(); ++i)
    if (in_support[i]) cluster.support_indices.push_back(i);

  if (!cluster.seed_indices.empty())
    cluster.centroid = sum * (1.0 / static_cast<double>(cluster.seed_indices.size()));
  return cluster;
}

}  // namespace labelprop
