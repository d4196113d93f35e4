#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "labelprop/point_cloud.hpp"
#include "labelprop/rng.hpp"

namespace labelprop {

struct KMeansResult {
  std::vector<std::uint32_t> assignment;  // per input point, dense cluster id
  std::vector<Vec3> centroids;            // one per non-empty cluster
};

/// Lloyd's k-means over 3D coordinates with k-means++ initialization.
/// Deterministic under a fixed seed. When fewer points than k are given,
/// every point becomes its own cluster. Empty clusters are dropped, so the
/// returned cluster count can be below k.
inline KMeansResult kmeans(const std::vector<Vec3>& points, int k,
                           std::uint64_t seed, int max_iterations = 50,
                           double tolerance = 1e-4) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (points.empty()) throw std::invalid_argument("kmeans needs at least one point");
  const std::size_t n = points.size();

  KMeansResult result;
  if (n <= static_cast<std::size_t>(k)) {
    result.assignment.resize(n);
    result.centroids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      result.assignment[i] = static_cast<std::uint32_t>(i);
      result.centroids[i] = points[i];
    }
    return result;
  }

  std::mt19937_64 gen(seed);

  // k-means++: each next center drawn with probability proportional to the
  // squared distance to the nearest already-chosen center.
  std::vector<Vec3> centers;
  centers.reserve(k);
  centers.push_back(points[uniform_index(gen, n)]);
  std::vector<double> d2(n, std::numeric_limits<double>::max());
  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = squared_distance(points[i], centers.back());
      if (d < d2[i]) d2[i] = d;
      total += d2[i];
    }
    if (total <= 0.0) break;  // all remaining points coincide with a center
    const double target = uniform_unit(gen) * total;
    double cumulative = 0.0;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      cumulative += d2[i];
      if (cumulative >= target) {
        chosen = i;
        break;
      }
    }
    centers.push_back(points[chosen]);
  }

  const std::size_t kc = centers.size();
  std::vector<std::uint32_t> assignment(n, 0);
  std::vector<Vec3> sums(kc);
  std::vector<std::size_t> counts(kc);
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      std::uint32_t arg = 0;
      for (std::size_t c = 0; c < kc; ++c) {
        const double d = squared_distance(points[i], centers[c]);
        if (d < best) {
          best = d;
          arg = static_cast<std::uint32_t>(c);
        }
      }
      assignment[i] = arg;
    }
    std::fill(sums.begin(), sums.end(), Vec3{});
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      sums[assignment[i]] += points[i];
      ++counts[assignment[i]];
    }
    double moved = 0.0;
    for (std::size_t c = 0; c < kc; ++c) {
      if (counts[c] == 0) continue;
      const Vec3 next = sums[c] * (1.0 / static_cast<double>(counts[c]));
      moved = std::max(moved, distance(next, centers[c]));
      centers[c] = next;
    }
    if (moved < tolerance) break;
  }

  // Final assignment against the converged centers, then drop empty clusters.
  std::vector<std::size_t> final_count(kc, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::max();
    std::uint32_t arg = 0;
    for (std::size_t c = 0; c < kc; ++c) {
      const double d = squared_distance(points[i], centers[c]);
      if (d < best) {
        best = d;
        arg = static_cast<std::uint32_t>(c);
      }
    }
    assignment[i] = arg;
    ++final_count[arg];
  }
  std::vector<std::uint32_t> remap(kc, 0);
  for (std::size_t c = 0; c < kc; ++c) {
    if (final_count[c] == 0) continue;
    remap[c] = static_cast<std::uint32_t>(result.centroids.size());
    result.centroids.push_back(centers[c]);
  }
  result.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.assignment[i] = remap[assignment[i]];
  return result;
}

}  // namespace labelprop
