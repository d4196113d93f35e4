#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "labelprop/point_cloud.hpp"

namespace labelprop {

struct VoxelKey {
  std::int32_t x = 0, y = 0, z = 0;
  bool operator==(const VoxelKey&) const = default;
};

// Floor division anchored at the world origin. Boundary coordinates resolve
// by floor semantics, deterministically and order-independently.
inline std::int32_t voxel_coord(double v, double voxel_size) {
  return static_cast<std::int32_t>(std::floor(v / voxel_size));
}

inline VoxelKey voxel_key_of(const Vec3& p, double voxel_size) {
  return {voxel_coord(p.x, voxel_size), voxel_coord(p.y, voxel_size),
          voxel_coord(p.z, voxel_size)};
}

// 21 bits per axis, biased. Covers +-52 km of world at 5 cm cells.
inline std::uint64_t pack_voxel_key(const VoxelKey& k) {
  constexpr std::int32_t kBias = 1 << 20;
  constexpr std::int32_t kMax = (1 << 21) - 1;
  const std::int32_t bx = k.x + kBias, by = k.y + kBias, bz = k.z + kBias;
  if ((bx | by | bz) < 0 || bx > kMax || by > kMax || bz > kMax)
    throw std::out_of_range("voxel key outside the packable range");
  return (static_cast<std::uint64_t>(bx) << 42) |
         (static_cast<std::uint64_t>(by) << 21) | static_cast<std::uint64_t>(bz);
}

namespace detail {

// Open-addressing map from packed voxel key to a dense cell id. Linear
// probing over a power-of-two table; sized once at build time.
class VoxelKeyMap {
 public:
  static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

  explicit VoxelKeyMap(std::size_t expected_keys = 0) {
    std::size_t cap = 16;
    while (cap < expected_keys * 2) cap <<= 1;
    slots_.assign(cap, Slot{kEmpty, 0});
    mask_ = cap - 1;
  }

  std::uint32_t find_or_insert(std::uint64_t key, std::uint32_t next_id) {
    std::size_t i = index_of(key);
    while (slots_[i].key != kEmpty) {
      if (slots_[i].key == key) return slots_[i].value;
      i = (i + 1) & mask_;
    }
    slots_[i] = Slot{key, next_id};
    ++size_;
    return next_id;
  }

  // Returns cell id or uint32 max when absent.
  std::uint32_t find(std::uint64_t key) const {
    std::size_t i = index_of(key);
    while (slots_[i].key != kEmpty) {
      if (slots_[i].key == key) return slots_[i].value;
      i = (i + 1) & mask_;
    }
    return kAbsent;
  }

  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

  std::size_t size() const { return size_; }

 private:
  struct Slot {
    std::uint64_t key;
    std::uint32_t value;
  };

  std::size_t index_of(std::uint64_t key) const {
    // Fibonacci hashing; keys are already well spread across the low bits.
    return static_cast<std::size_t>((key * 0x9e3779b97f4a7c15ull) >> 32) & mask_;
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace detail

/// Hash grid over a point cloud: packed voxel key -> list of point indices,
/// stored CSR-style. Every indexed point lies in exactly one cell and its
/// per-axis floor(coord / voxel_size) equals the cell key.
class VoxelGrid {
 public:
  VoxelGrid() : voxel_size_(1.0), key_map_(0) {}

  VoxelGrid(const PointCloud& cloud, double voxel_size)
      : voxel_size_(voxel_size), key_map_(cloud.size() / 2 + 16) {
    if (voxel_size <= 0.0) throw std::invalid_argument("voxel_size must be > 0");
    const std::size_t n = cloud.size();
    std::vector<std::uint32_t> cell_of_point(n);
    std::vector<std::uint32_t> cell_count;
    cell_keys_.reserve(n / 4);
    for (std::size_t i = 0; i < n; ++i) {
      const VoxelKey k = voxel_key_of(cloud.points[i], voxel_size);
      const std::uint64_t packed = pack_voxel_key(k);
      const auto id = key_map_.find_or_insert(
          packed, static_cast<std::uint32_t>(cell_keys_.size()));
      if (id == cell_keys_.size()) {
        cell_keys_.push_back(k);
        cell_count.push_back(0);
      }
      cell_of_point[i] = id;
      ++cell_count[id];
    }
    offsets_.assign(cell_keys_.size() + 1, 0);
    for (std::size_t c = 0; c < cell_keys_.size(); ++c)
      offsets_[c + 1] = offsets_[c] + cell_count[c];
    indices_.resize(n);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
      indices_[cursor[cell_of_point[i]]++] = static_cast<std::uint32_t>(i);
  }

  double voxel_size() const { return voxel_size_; }
  std::size_t cell_count() const { return cell_keys_.size(); }
  std::size_t point_count() const { return indices_.size(); }

  std::span<const std::uint32_t> cell(const VoxelKey& k) const {
    const auto id = key_map_.find(pack_voxel_key(k));
    if (id == detail::VoxelKeyMap::kAbsent) return {};
    return cell_span(id);
  }

  const std::vector<VoxelKey>& cell_keys() const { return cell_keys_; }

  std::span<const std::uint32_t> cell_span(std::uint32_t cell_id) const {
    return {indices_.data() + offsets_[cell_id],
            offsets_[cell_id + 1] - offsets_[cell_id]};
  }

 private:
  double voxel_size_;
  detail::VoxelKeyMap key_map_;
  std::vector<VoxelKey> cell_keys_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> indices_;

  friend class RadiusSearch;
};

inline VoxelGrid build_voxel_grid(const PointCloud& cloud, double voxel_size) {
  return VoxelGrid(cloud, voxel_size);
}

struct Neighbor {
  std::uint32_t index;
  double distance;
};

namespace detail {

// Squared distance from v to the cell interval [k*s, (k+1)*s).
inline double axis_gap_sq(double v, std::int32_t k, double s) {
  const double lo = k * s;
  const double hi = lo + s;
  if (v < lo) {
    const double d = lo - v;
    return d * d;
  }
  if (v > hi) {
    const double d = v - hi;
    return d * d;
  }
  return 0.0;
}

}  // namespace detail

/// Exact radius query: returns all points of `cloud` with Euclidean distance
/// <= radius from `query`. Only voxels whose box intersects the query sphere
/// are visited.
inline void radius_neighbors_into(const VoxelGrid& grid, const PointCloud& cloud,
                                  const Vec3& query, double radius,
                                  std::vector<Neighbor>& out) {
  out.clear();
  if (radius <= 0.0) throw std::invalid_argument("radius must be > 0");
  const double s = grid.voxel_size();
  const double r2 = radius * radius;
  const std::int32_t x0 = voxel_coord(query.x - radius, s);
  const std::int32_t x1 = voxel_coord(query.x + radius, s);
  const std::int32_t y0 = voxel_coord(query.y - radius, s);
  const std::int32_t y1 = voxel_coord(query.y + radius, s);
  const std::int32_t z0 = voxel_coord(query.z - radius, s);
  const std::int32_t z1 = voxel_coord(query.z + radius, s);
  for (std::int32_t kx = x0; kx <= x1; ++kx) {
    const double gx = detail::axis_gap_sq(query.x, kx, s);
    if (gx > r2) continue;
    for (std::int32_t ky = y0; ky <= y1; ++ky) {
      const double gxy = gx + detail::axis_gap_sq(query.y, ky, s);
      if (gxy > r2) continue;
      for (std::int32_t kz = z0; kz <= z1; ++kz) {
        if (gxy + detail::axis_gap_sq(query.z, kz, s) > r2) continue;
        for (std::uint32_t idx : grid.cell({kx, ky, kz})) {
          const double d2 = squared_distance(cloud.points[idx], query);
          if (d2 <= r2) out.push_back({idx, std::sqrt(d2)});
        }
      }
    }
  }
}

inline std::vector<Neighbor> radius_neighbors(const VoxelGrid& grid,
                                              const PointCloud& cloud,
                                              const Vec3& query, double radius) {
  std::vector<Neighbor> out;
  radius_neighbors_into(grid, cloud, query, radius, out);
  return out;
}

}  // namespace labelprop
