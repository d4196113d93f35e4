#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "labelprop/frame.hpp"

namespace labelprop {

/// Recovers a per-point fiber index for sensors whose format stores none:
/// points are binned by vertical angle atan2(z, sqrt(x^2+y^2)) with a 1D
/// k-means (quantile init, Lloyd refinement), giving `num_beams` clusters.
/// Beams are numbered 0..num_beams-1 from the highest angle down.
inline std::vector<std::int32_t> recover_beams(const PointCloud& cloud,
                                               int num_beams) {
  if (num_beams < 1) throw std::invalid_argument("num_beams must be >= 1");
  if (cloud.empty()) throw std::runtime_error("beam recovery: empty cloud");

  std::vector<double> angle(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    angle[i] = std::atan2(p.z, std::sqrt(p.x * p.x + p.y * p.y));
  }

  std::vector<double> sorted = angle;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t distinct =
      std::unique(sorted.begin(), sorted.end()) - sorted.begin();
  if (distinct < static_cast<std::size_t>(num_beams))
    throw std::runtime_error(
        "beam recovery: degenerate vertical-angle histogram (" +
        std::to_string(distinct) + " distinct angles for " +
        std::to_string(num_beams) + " beams)");
  sorted.resize(distinct);

  // 1D k-means: fibers form tight angle bands with wide gaps in between, so
  // the centers are seeded from the num_beams-1 largest gaps (Lloyd from a
  // quantile seed stalls in local minima that split one band and merge two).
  // Ties on gap size break toward the lower index, keeping this fully
  // deterministic. Lloyd with midpoint boundaries then refines the centers.
  std::vector<std::size_t> gap_order(distinct - 1);
  for (std::size_t i = 0; i + 1 < distinct; ++i) gap_order[i] = i;
  std::stable_sort(gap_order.begin(), gap_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return sorted[a + 1] - sorted[a] > sorted[b + 1] - sorted[b];
                   });
  std::vector<std::size_t> cuts(gap_order.begin(),
                                gap_order.begin() + (num_beams - 1));
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> centers(num_beams);
  std::size_t begin = 0;
  for (int b = 0; b < num_beams; ++b) {
    const std::size_t end = (b + 1 < num_beams) ? cuts[b] + 1 : distinct;
    double mean = 0.0;
    for (std::size_t i = begin; i < end; ++i) mean += sorted[i];
    centers[b] = mean / static_cast<double>(end - begin);
    begin = end;
  }

  std::vector<double> sum(num_beams);
  std::vector<std::size_t> count(num_beams);
  std::vector<double> boundary(num_beams - 1);
  for (int iter = 0; iter < 50; ++iter) {
    for (int b = 0; b + 1 < num_beams; ++b)
      boundary[b] = 0.5 * (centers[b] + centers[b + 1]);
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(count.begin(), count.end(), std::size_t{0});
    for (double a : angle) {
      const int b = static_cast<int>(
          std::upper_bound(boundary.begin(), boundary.end(), a) - boundary.begin());
      sum[b] += a;
      ++count[b];
    }
    double moved = 0.0;
    for (int b = 0; b < num_beams; ++b) {
      if (count[b] == 0) continue;  // keep the previous center
      const double next = sum[b] / static_cast<double>(count[b]);
      moved = std::max(moved, std::abs(next - centers[b]));
      centers[b] = next;
    }
    std::sort(centers.begin(), centers.end());
    if (moved < 1e-9) break;
  }

  // Highest angle becomes beam 0.
  for (int b = 0; b + 1 < num_beams; ++b)
    boundary[b] = 0.5 * (centers[b] + centers[b + 1]);
  std::vector<std::int32_t> beams(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const int b = static_cast<int>(
        std::upper_bound(boundary.begin(), boundary.end(), angle[i]) -
        boundary.begin());
    beams[i] = static_cast<std::int32_t>(num_beams - 1 - b);
  }
  return beams;
}

inline std::vector<std::uint32_t> decimation_keep_indices(
    const std::vector<std::int32_t>& beams, int keep_modulus) {
  if (keep_modulus < 1) throw std::invalid_argument("keep_modulus must be >= 1");
  std::vector<std::uint32_t> kept;
  for (std::size_t i = 0; i < beams.size(); ++i)
    if (beams[i] % keep_modulus == 0) kept.push_back(static_cast<std::uint32_t>(i));
  return kept;
}

/// Keeps points whose beam index is 0 mod keep_modulus and renumbers the
/// beam channel densely. Beam indices come from the native channel when
/// present, otherwise from recover_beams.
inline Frame decimate_fibers(const Frame& frame, int keep_modulus,
                             int nominal_beams = 64) {
  std::vector<std::int32_t> beams;
  if (frame.cloud.has_beam())
    beams = frame.cloud.beam;
  else
    beams = recover_beams(frame.cloud, nominal_beams);

  const auto kept = decimation_keep_indices(beams, keep_modulus);
  Frame out;
  out.pose = frame.pose;
  out.index = frame.index;
  out.timestamp = frame.timestamp;
  out.cloud.reserve(kept.size());
  for (std::uint32_t i : kept) {
    out.cloud.points.push_back(frame.cloud.points[i]);
    if (frame.cloud.has_reflectivity())
      out.cloud.reflectivity.push_back(frame.cloud.reflectivity[i]);
    if (frame.cloud.has_frame_of_origin())
      out.cloud.frame_of_origin.push_back(frame.cloud.frame_of_origin[i]);
    out.cloud.beam.push_back(beams[i] / keep_modulus);
  }
  return out;
}

}  // namespace labelprop
