#include <algorithm>
#include <set>

#include "doctest.h"
#include "labelprop/densify.hpp"
#include "labelprop/kmeans.hpp"
#include "support/test_support.hpp"

using namespace labelprop;
using namespace testsupport;

TEST_CASE("kmeans with k=1 returns the barycenter") {
  std::mt19937_64 gen(41);
  std::vector<Vec3> points;
  Vec3 sum;
  for (int i = 0; i < 100; ++i) {
    points.push_back({uniform_in(gen, -1.0, 1.0), uniform_in(gen, -1.0, 1.0),
                      uniform_in(gen, -1.0, 1.0)});
    sum += points.back();
  }
  const auto result = kmeans(points, 1, 7);
  REQUIRE(result.centroids.size() == 1);
  const Vec3 expected = sum * (1.0 / 100.0);
  CHECK(distance(result.centroids[0], expected) < 1e-9);
  for (const auto a : result.assignment) CHECK(a == 0);
}

TEST_CASE("kmeans separates two well-separated blobs") {
  std::mt19937_64 gen(42);
  std::vector<Vec3> points;
  for (int i = 0; i < 200; ++i)
    points.push_back({uniform_in(gen, -1.0, 1.0), uniform_in(gen, -1.0, 1.0),
                      uniform_in(gen, -1.0, 1.0)});
  for (int i = 0; i < 200; ++i)
    points.push_back({uniform_in(gen, 19.0, 21.0), uniform_in(gen, -1.0, 1.0),
                      uniform_in(gen, -1.0, 1.0)});
  const auto result = kmeans(points, 2, 7);
  REQUIRE(result.centroids.size() == 2);
  // No assignment crosses the midplane x = 10.
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool left = points[i].x < 10.0;
    const bool centroid_left = result.centroids[result.assignment[i]].x < 10.0;
    CHECK(left == centroid_left);
  }
}

TEST_CASE("kmeans with k >= point count gives singletons") {
  std::vector<Vec3> points{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  const auto result = kmeans(points, 5, 7);
  REQUIRE(result.centroids.size() == 3);
  std::set<std::uint32_t> ids(result.assignment.begin(), result.assignment.end());
  CHECK(ids.size() == 3);
  for (std::size_t i = 0; i < points.size(); ++i)
    CHECK(distance(result.centroids[result.assignment[i]], points[i]) == 0.0);

  const auto exact = kmeans(points, 3, 7);
  CHECK(exact.centroids.size() == 3);
}

TEST_CASE("kmeans is deterministic under a fixed seed") {
  std::mt19937_64 gen(43);
  std::vector<Vec3> points;
  for (int i = 0; i < 500; ++i)
    points.push_back({uniform_in(gen, 0.0, 10.0), uniform_in(gen, 0.0, 10.0),
                      uniform_in(gen, 0.0, 10.0)});
  const auto a = kmeans(points, 10, 99);
  const auto b = kmeans(points, 10, 99);
  CHECK(a.assignment == b.assignment);
  REQUIRE(a.centroids.size() == b.centroids.size());
  for (std::size_t c = 0; c < a.centroids.size(); ++c)
    CHECK(distance(a.centroids[c], b.centroids[c]) == 0.0);
}

TEST_CASE("kmeans rejects bad arguments") {
  CHECK_THROWS(kmeans({}, 1, 0));
  CHECK_THROWS(kmeans({{0, 0, 0}}, 0, 0));
}

TEST_CASE("subvoxel neighborhood per position class") {
  CHECK(subvoxel_neighborhood(0.5, 0.5, 0.5).empty());

  // The 2D middle-left analogue: low x, centered y (and centered z here).
  const auto face = subvoxel_neighborhood(0.1, 0.5, 0.5);
  REQUIRE(face.size() == 1);
  CHECK(face[0] == VoxelOffset{-1, 0, 0});

  const auto edge = subvoxel_neighborhood(0.1, 0.9, 0.5);
  CHECK(edge.size() == 3);

  const auto corner = subvoxel_neighborhood(0.1, 0.1, 0.1);
  REQUIRE(corner.size() == 7);
  std::set<std::tuple<int, int, int>> got;
  for (const auto& o : corner) got.insert({o.dx, o.dy, o.dz});
  std::set<std::tuple<int, int, int>> expected;
  for (int dx : {-1, 0})
    for (int dy : {-1, 0})
      for (int dz : {-1, 0})
        if (dx || dy || dz) expected.insert({dx, dy, dz});
  CHECK(got == expected);

  // Boundary thirds.
  CHECK(subvoxel_neighborhood(1.0 / 3.0, 0.5, 0.5).empty());
  CHECK(subvoxel_neighborhood(2.0 / 3.0, 0.5, 0.5).size() == 1);
}

namespace {

AccumulatedCloud acc_from_cloud(PointCloud cloud, double voxel_size) {
  AccumulatedCloud acc;
  acc.cloud = std::move(cloud);
  acc.semantics = SemanticState::unlabeled(acc.cloud.size());
  acc.search_grid = VoxelGrid(acc.cloud, voxel_size);
  acc.origins.resize(acc.cloud.size());
  return acc;
}

}  // namespace

TEST_CASE("densify: seed at the voxel center fetches only its own voxel") {
  PointCloud acc_cloud;
  acc_cloud.points = {{1.0, 1.0, 1.0},    // same voxel as the seed (V_c = 2)
                      {3.0, 1.0, 1.0},    // +x neighbor voxel
                      {-1.0, 1.0, 1.0}};  // -x neighbor voxel
  const auto acc = acc_from_cloud(acc_cloud, 0.05);
  const VoxelGrid vc_grid(acc.cloud, 2.0);

  PointCloud current;
  current.points = {{1.0, 1.0, 1.0}};  // dead center of voxel (0,0,0)
  DensifyParams params;
  params.densify_voxel_size = 2.0;

  const auto cluster = densify(current, {0}, acc, vc_grid, params);
  CHECK(cluster.support_indices == std::vector<std::uint32_t>{0});
}

TEST_CASE("densify: off-center seed pulls the neighbor voxels it faces") {
  PointCloud acc_cloud;
  acc_cloud.points = {{1.0, 1.0, 1.0}, {3.0, 1.0, 1.0}, {-1.0, 1.0, 1.0}};
  const auto acc = acc_from_cloud(acc_cloud, 0.05);
  const VoxelGrid vc_grid(acc.cloud, 2.0);

  PointCloud current;
  current.points = {{0.2, 1.0, 1.0}};  // low-x sub-voxel of voxel (0,0,0)
  DensifyParams params;
  params.densify_voxel_size = 2.0;

  const auto cluster = densify(current, {0}, acc, vc_grid, params);
  CHECK(cluster.support_indices == std::vector<std::uint32_t>{0, 2});
}

TEST_CASE("densify coverage guarantee on random instances") {
  std::mt19937_64 gen(44);
  DensifyParams params;
  params.densify_voxel_size = 2.0;
  const double vc = params.densify_voxel_size;
  for (int instance = 0; instance < 10; ++instance) {
    const PointCloud cloud = random_cloud(gen, 2000, 0.0, 12.0);
    const auto acc = acc_from_cloud(cloud, 0.05);
    const VoxelGrid vc_grid(acc.cloud, vc);

    PointCloud current = random_cloud(gen, 50, 0.0, 12.0);
    std::vector<std::uint32_t> seeds(current.size());
    for (std::uint32_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    const auto cluster = densify(current, seeds, acc, vc_grid, params);

    std::vector<bool> support(acc.size(), false);
    for (const auto s : cluster.support_indices) support[s] = true;
    for (std::uint32_t q = 0; q < acc.size(); ++q) {
      if (support[q]) continue;
      for (const auto& seed : current.points) {
        const Vec3 d = acc.cloud.points[q] - seed;
        const double linf =
            std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
        CHECK(linf > vc / 3.0);
      }
    }
  }
}

TEST_CASE("densify leaves seeds intact and support within the accumulated cloud") {
  std::mt19937_64 gen(45);
  const PointCloud cloud = random_cloud(gen, 500, 0.0, 6.0);
  const auto acc = acc_from_cloud(cloud, 0.05);
  DensifyParams params;
  const VoxelGrid vc_grid(acc.cloud, params.densify_voxel_size);

  const PointCloud current = random_cloud(gen, 30, 0.0, 6.0);
  const std::vector<std::uint32_t> seeds{3, 7, 11};
  const auto cluster = densify(current, seeds, acc, vc_grid, params);
  CHECK(cluster.seed_indices == seeds);
  for (const auto s : cluster.support_indices) CHECK(s < acc.size());
  CHECK(std::is_sorted(cluster.support_indices.begin(),
                       cluster.support_indices.end()));
  // No duplicates.
  CHECK(std::adjacent_find(cluster.support_indices.begin(),
                           cluster.support_indices.end()) ==
        cluster.support_indices.end());
}
