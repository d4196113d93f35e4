#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelprop/geometry.hpp"

namespace labelprop {

/// Flat point collection with optional per-point channels. A channel, when
/// present, has exactly the same length as `points`.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<float> reflectivity;       // in [0,1]
  std::vector<std::int32_t> beam;        // laser fiber index, >= 0
  std::vector<std::int32_t> frame_of_origin;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  bool has_reflectivity() const { return !reflectivity.empty(); }
  bool has_beam() const { return !beam.empty(); }
  bool has_frame_of_origin() const { return !frame_of_origin.empty(); }

  void check_channels() const {
    if (has_reflectivity() && reflectivity.size() != points.size())
      throw std::invalid_argument("reflectivity channel length mismatch");
    if (has_beam() && beam.size() != points.size())
      throw std::invalid_argument("beam channel length mismatch");
    if (has_frame_of_origin() && frame_of_origin.size() != points.size())
      throw std::invalid_argument("frame_of_origin channel length mismatch");
  }

  void check_finite() const {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!points[i].finite())
        throw std::invalid_argument("non-finite coordinates at point " +
                                    std::to_string(i));
  }

  void push_back(const Vec3& p) { points.push_back(p); }

  /// Copies point i of `src` together with whatever channels `src` carries.
  void append_from(const PointCloud& src, std::size_t i) {
    points.push_back(src.points[i]);
    if (src.has_reflectivity()) reflectivity.push_back(src.reflectivity[i]);
    if (src.has_beam()) beam.push_back(src.beam[i]);
    if (src.has_frame_of_origin())
      frame_of_origin.push_back(src.frame_of_origin[i]);
  }

  void reserve(std::size_t n) { points.reserve(n); }
};

/// p' = R p + t applied to every point; channels are carried through.
inline PointCloud transform(const PointCloud& cloud, const Pose& pose) {
  pose.validate();
  PointCloud out = cloud;
  for (auto& p : out.points) p = pose.apply(p);
  return out;
}

}  // namespace labelprop
