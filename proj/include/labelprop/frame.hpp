#pragma once

#include <cstdint>
#include <optional>

#include "labelprop/geometry.hpp"
#include "labelprop/point_cloud.hpp"

namespace labelprop {

/// One LiDAR sweep in sensor coordinates plus its sensor-to-world pose.
struct Frame {
  PointCloud cloud;
  Pose pose;
  std::int64_t index = 0;
  std::optional<double> timestamp;
};

}  // namespace labelprop
