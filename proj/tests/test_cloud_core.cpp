#include <algorithm>
#include <set>

#include "doctest.h"
#include "labelprop/augment.hpp"
#include "labelprop/subsample.hpp"
#include "labelprop/voxel_grid.hpp"
#include "support/test_support.hpp"

using namespace labelprop;
using namespace testsupport;

TEST_CASE("grid_subsample keeps points in distinct voxels untouched") {
  PointCloud cloud;
  cloud.points = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  const auto result = grid_subsample(cloud, 0.05);
  REQUIRE(result.cloud.size() == 3);
  std::set<std::uint32_t> sources(result.source_index.begin(),
                                  result.source_index.end());
  CHECK(sources == std::set<std::uint32_t>{0, 1, 2});
}

TEST_CASE("grid_subsample keeps the point nearest the voxel barycenter") {
  std::mt19937_64 gen(11);
  PointCloud cloud;
  for (int i = 0; i < 10; ++i)
    cloud.points.push_back({uniform_in(gen, 0.0, 0.05),
                            uniform_in(gen, 0.0, 0.05),
                            uniform_in(gen, 0.0, 0.05)});
  const auto result = grid_subsample(cloud, 0.05);
  REQUIRE(result.cloud.size() == 1);

  const Vec3 barycenter_of_voxel{0.025, 0.025, 0.025};
  std::uint32_t expected = 0;
  double best = squared_distance(cloud.points[0], barycenter_of_voxel);
  for (std::uint32_t i = 1; i < 10; ++i) {
    const double d = squared_distance(cloud.points[i], barycenter_of_voxel);
    if (d < best) {
      best = d;
      expected = i;
    }
  }
  CHECK(result.source_index[0] == expected);
}

TEST_CASE("grid_subsample carries channels and validates input") {
  PointCloud cloud;
  cloud.points = {{0.01, 0.01, 0.01}, {0.02, 0.02, 0.02}, {2.0, 2.0, 2.0}};
  cloud.reflectivity = {0.1f, 0.2f, 0.3f};
  cloud.beam = {5, 6, 7};
  const auto result = grid_subsample(cloud, 0.05);
  REQUIRE(result.cloud.size() == 2);
  for (std::size_t i = 0; i < result.cloud.size(); ++i) {
    const auto src = result.source_index[i];
    CHECK(result.cloud.reflectivity[i] == cloud.reflectivity[src]);
    CHECK(result.cloud.beam[i] == cloud.beam[src]);
  }

  PointCloud bad;
  bad.points = {{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}};
  CHECK_THROWS(grid_subsample(bad, 0.05));
  CHECK_THROWS(grid_subsample(cloud, 0.0));
}

TEST_CASE("grid_subsample output is a subset with pairwise distinct keys") {
  std::mt19937_64 gen(12);
  const PointCloud cloud = random_cloud(gen, 500, 0.0, 2.0);
  const double vs = 0.05;
  const auto result = grid_subsample(cloud, vs);
  std::set<std::tuple<int, int, int>> keys;
  for (std::size_t i = 0; i < result.cloud.size(); ++i) {
    const auto k = voxel_key_of(result.cloud.points[i], vs);
    CHECK(keys.insert({k.x, k.y, k.z}).second);
    const auto& p = result.cloud.points[i];
    const auto& q = cloud.points[result.source_index[i]];
    CHECK(p.x == q.x);
    CHECK(p.y == q.y);
    CHECK(p.z == q.z);
  }
}

TEST_CASE("transform: identity and pure translation") {
  PointCloud cloud;
  cloud.points = {{0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}};
  const PointCloud same = transform(cloud, Pose::identity());
  CHECK(same.points[1].x == 1.0);
  CHECK(same.points[1].y == 2.0);

  Pose shift;
  shift.translation = {1.0, 0.0, 0.0};
  const PointCloud moved = transform(cloud, shift);
  CHECK(moved.points[0].x == doctest::Approx(1.0));
  CHECK(moved.points[0].y == doctest::Approx(0.0));
  CHECK(moved.points[0].z == doctest::Approx(0.0));
}

TEST_CASE("transform preserves pairwise distances") {
  std::mt19937_64 gen(13);
  const PointCloud cloud = random_cloud(gen, 40, -5.0, 5.0);
  const Pose pose = random_pose(gen);
  const PointCloud moved = transform(cloud, pose);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      const double before = distance(cloud.points[i], cloud.points[j]);
      const double after = distance(moved.points[i], moved.points[j]);
      CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, before));
    }
}

TEST_CASE("transform composes") {
  std::mt19937_64 gen(14);
  const PointCloud cloud = random_cloud(gen, 25, -4.0, 4.0);
  const Pose a = random_pose(gen);
  const Pose b = random_pose(gen);
  const PointCloud two_steps = transform(transform(cloud, a), b);
  const PointCloud one_step = transform(cloud, b.compose(a));
  for (std::size_t i = 0; i < cloud.size(); ++i)
    CHECK(distance(two_steps.points[i], one_step.points[i]) < 1e-9);
}

TEST_CASE("pose validation rejects non-orthonormal rotations") {
  Pose p;
  p.rotation.m = {1, 0, 0, 0, 2, 0, 0, 0, 1};
  CHECK_THROWS(p.validate());
  // Determinant -1 (a reflection) is not a rotation.
  Pose r;
  r.rotation.m = {1, 0, 0, 0, 1, 0, 0, 0, -1};
  CHECK_THROWS(r.validate());
}

TEST_CASE("build_voxel_grid: empty cloud, key arithmetic, partition") {
  const PointCloud empty;
  const VoxelGrid grid(empty, 0.05);
  CHECK(grid.cell_count() == 0);

  PointCloud one;
  one.points = {{0.07, 0.0, 0.0}};
  const VoxelGrid g1(one, 0.05);
  CHECK(g1.cell({1, 0, 0}).size() == 1);

  std::mt19937_64 gen(15);
  const PointCloud cloud = random_cloud(gen, 300, -2.0, 2.0);
  const VoxelGrid grid2(cloud, 0.1);
  std::size_t total = 0;
  std::vector<bool> seen(cloud.size(), false);
  for (const auto& key : grid2.cell_keys()) {
    for (std::uint32_t idx : grid2.cell(key)) {
      CHECK(!seen[idx]);
      seen[idx] = true;
      const auto k = voxel_key_of(cloud.points[idx], 0.1);
      CHECK(k == key);
      ++total;
    }
  }
  CHECK(total == cloud.size());
}

TEST_CASE("radius_neighbors: trivial cases") {
  PointCloud cloud;
  cloud.points = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  const VoxelGrid grid(cloud, 0.05);
  CHECK(radius_neighbors(grid, cloud, {50.0, 50.0, 50.0}, 0.3).empty());

  const auto hits = radius_neighbors(grid, cloud, {0.0, 0.0, 0.0}, 0.3);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].index == 0);
  CHECK(hits[0].distance == 0.0);
}

TEST_CASE("radius_neighbors equals brute force on random clouds") {
  std::mt19937_64 gen(16);
  const PointCloud cloud = random_cloud(gen, 1000, 0.0, 5.0);
  const double vs = 0.05;
  const VoxelGrid grid(cloud, vs);
  for (const double radius : {0.08, 0.3, 0.5}) {
    REQUIRE(radius <= 10 * vs);
    for (int q = 0; q < 30; ++q) {
      const Vec3 query{uniform_in(gen, 0.0, 5.0), uniform_in(gen, 0.0, 5.0),
                       uniform_in(gen, 0.0, 5.0)};
      auto fast = radius_neighbors(grid, cloud, query, radius);
      std::vector<std::uint32_t> fast_ids;
      for (const auto& h : fast) fast_ids.push_back(h.index);
      std::sort(fast_ids.begin(), fast_ids.end());
      CHECK(fast_ids == brute_force_radius(cloud, query, radius));
    }
  }
}

TEST_CASE("augment: centering moves the barycenter to the origin") {
  PointCloud cloud;
  cloud.points = {{1.0, 1.0, 1.0}, {3.0, 3.0, 3.0}};
  AugmentSpec spec;
  spec.center = true;
  const PointCloud out = augment(cloud, spec, 1);
  const Vec3 c = barycenter(out);
  CHECK(std::abs(c.x) < 1e-12);
  CHECK(std::abs(c.y) < 1e-12);
  CHECK(std::abs(c.z) < 1e-12);
}

TEST_CASE("augment: z-rotation by pi, zero noise, determinism") {
  PointCloud cloud;
  cloud.points = {{1.0, 0.0, 0.0}};
  AugmentSpec rot;
  rot.rotation_z = 3.14159265358979323846;
  const PointCloud rotated = augment(cloud, rot, 1);
  CHECK(std::abs(rotated.points[0].x + 1.0) < 1e-12);
  CHECK(std::abs(rotated.points[0].y) < 1e-12);

  AugmentSpec noise;
  noise.noise_sigma = 0.0;
  const PointCloud same = augment(cloud, noise, 99);
  CHECK(same.points[0].x == 1.0);

  std::mt19937_64 gen(17);
  const PointCloud random = random_cloud(gen, 50, -1.0, 1.0);
  AugmentSpec full;
  full.center = true;
  full.random_rotation_z = true;
  full.random_scale = {{0.9, 1.1}};
  full.noise_sigma = 0.01;
  full.random_flip_x = true;
  full.random_flip_y = true;
  const PointCloud a = augment(random, full, 42);
  const PointCloud b = augment(random, full, 42);
  const PointCloud c = augment(random, full, 43);
  REQUIRE(a.size() == b.size());
  bool all_equal_ab = true, all_equal_ac = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    all_equal_ab &= (a.points[i].x == b.points[i].x &&
                     a.points[i].y == b.points[i].y &&
                     a.points[i].z == b.points[i].z);
    all_equal_ac &= (a.points[i].x == c.points[i].x);
  }
  CHECK(all_equal_ab);
  CHECK(!all_equal_ac);
}
