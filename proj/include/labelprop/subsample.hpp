#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "labelprop/voxel_grid.hpp"

namespace labelprop {

struct SubsampleResult {
  PointCloud cloud;
  std::vector<std::uint32_t> source_index;  // per output point, index into input
};

/// One point kept per occupied voxel: the existing input point nearest the
/// voxel barycenter (selection, not averaging, so per-point channels stay
/// attributes of real points). Ties go to the smallest input index.
inline SubsampleResult grid_subsample(const PointCloud& cloud, double voxel_size) {
  if (voxel_size <= 0.0) throw std::invalid_argument("voxel_size must be > 0");
  cloud.check_channels();
  cloud.check_finite();

  const VoxelGrid grid(cloud, voxel_size);
  SubsampleResult result;
  result.cloud.reserve(grid.cell_count());
  result.source_index.reserve(grid.cell_count());
  const auto& keys = grid.cell_keys();
  for (std::uint32_t c = 0; c < keys.size(); ++c) {
    const Vec3 center{(keys[c].x + 0.5) * voxel_size,
                      (keys[c].y + 0.5) * voxel_size,
                      (keys[c].z + 0.5) * voxel_size};
    std::uint32_t best = 0;
    double best_d2 = 0.0;
    bool first = true;
    for (std::uint32_t idx : grid.cell_span(c)) {
      const double d2 = squared_distance(cloud.points[idx], center);
      if (first || d2 < best_d2 || (d2 == best_d2 && idx < best)) {
        best = idx;
        best_d2 = d2;
        first = false;
      }
    }
    result.cloud.append_from(cloud, best);
    result.source_index.push_back(best);
  }
  return result;
}

}  // namespace labelprop
