#pragma once

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "labelprop/frame.hpp"
#include "labelprop/semantics.hpp"
#include "labelprop/subsample.hpp"
#include "labelprop/voxel_grid.hpp"

namespace labelprop {

struct AccumulateParams {
  int n_frames = 20;        // lookback depth, in raw frame indices
  int stride = 1;           // keep one frame out of `stride`
  double voxel_size = 0.05; // grid subsampling resolution, meters
  double crop_radius = 60.0;// drop points farther than this from the sensor
};

/// Identifies where an accumulated point came from: its frame index in the
/// sequence and its point index within that frame's original cloud.
struct PointOrigin {
  std::int64_t frame = 0;
  std::uint32_t point = 0;
};

/// World-coordinate union of the selected past frames and the current one,
/// grid-subsampled, with per-point inferred semantics and the subsampling
/// voxelization kept for radius searches.
struct AccumulatedCloud {
  PointCloud cloud;          // world coordinates
  SemanticState semantics;   // current-frame points enter as kNoLabel / 0
  VoxelGrid search_grid;     // built over `cloud` at params.voxel_size
  std::vector<PointOrigin> origins;
  std::vector<std::int64_t> window;  // contributing frame indices, current last

  std::size_t size() const { return cloud.size(); }
};

/// Past frames selected for accumulation ahead of frame `current_index`:
/// indices current - stride, current - 2*stride, ... down to
/// current - n_frames. With stride 1 that is the last n_frames frames; with
/// stride 5 and n_frames 20, frames n-5, n-10, n-15, n-20.
inline std::vector<std::int64_t> accumulation_window(std::int64_t current_index,
                                                     const AccumulateParams& p) {
  std::vector<std::int64_t> selected;
  if (p.stride < 1 || p.n_frames < 0) return selected;
  for (int m = 1; m * p.stride <= p.n_frames; ++m)
    selected.push_back(current_index - static_cast<std::int64_t>(m) * p.stride);
  return selected;
}

inline AccumulatedCloud accumulate(
    const std::deque<std::pair<Frame, SemanticState>>& window,
    const Frame& current, const AccumulateParams& params) {
  current.pose.validate();
  const Vec3 center = current.pose.translation;
  const double crop2 = params.crop_radius * params.crop_radius;

  // Concatenate the selected past frames (ascending index) and the current
  // frame in world coordinates, keeping only points inside the crop sphere.
  PointCloud merged;
  SemanticState merged_sem;
  std::vector<PointOrigin> merged_origin;
  std::vector<std::int64_t> contributing;

  const auto wanted = accumulation_window(current.index, params);
  auto add_frame = [&](const Frame& f, const SemanticState* sem) {
    f.pose.validate();
    if (sem && sem->size() != f.cloud.size())
      throw std::invalid_argument("frame semantics length mismatch");
    for (std::uint32_t i = 0; i < f.cloud.size(); ++i) {
      const Vec3 world = f.pose.apply(f.cloud.points[i]);
      if (squared_distance(world, center) > crop2) continue;
      merged.points.push_back(world);
      merged.frame_of_origin.push_back(static_cast<std::int32_t>(f.index));
      if (sem) {
        merged_sem.labels.push_back(sem->labels[i]);
        merged_sem.confidence.push_back(sem->confidence[i]);
      } else {
        merged_sem.labels.push_back(kNoLabel);
        merged_sem.confidence.push_back(0.0f);
      }
      merged_origin.push_back({f.index, i});
    }
    contributing.push_back(f.index);
  };

  for (auto it = wanted.rbegin(); it != wanted.rend(); ++it) {
    for (const auto& [frame, sem] : window) {
      if (frame.index == *it) {
        add_frame(frame, &sem);
        break;
      }
    }
  }
  add_frame(current, nullptr);

  const SubsampleResult sub = grid_subsample(merged, params.voxel_size);

  AccumulatedCloud acc;
  acc.cloud = std::move(sub.cloud);
  acc.semantics.labels.reserve(sub.source_index.size());
  acc.semantics.confidence.reserve(sub.source_index.size());
  acc.origins.reserve(sub.source_index.size());
  for (std::uint32_t src : sub.source_index) {
    acc.semantics.labels.push_back(merged_sem.labels[src]);
    acc.semantics.confidence.push_back(merged_sem.confidence[src]);
    acc.origins.push_back(merged_origin[src]);
  }
  acc.search_grid = VoxelGrid(acc.cloud, params.voxel_size);
  acc.window = std::move(contributing);
  return acc;
}

}  // namespace labelprop
