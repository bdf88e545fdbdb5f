#include "topokit/lpvi.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "topokit/pd_metrics.hpp"

using namespace topokit;
using topokit::testing::Rng;

namespace {

PointCloud planar_grid(int nx, int ny) {
  std::vector<Point> pts;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      pts.push_back({static_cast<double>(i), static_cast<double>(j), 0.0});
  return make_cloud(std::move(pts), 3);
}

PointCloud sphere_cloud(int n, std::uint64_t seed) {
  Rng rng(seed);
  return make_cloud(topokit::testing::sphere_points(rng, n), 3);
}

}  // namespace

TEST_CASE("lpvi: cloud smaller than k+1 is rejected") {
  Rng rng(1);
  PointCloud c = make_cloud(topokit::testing::random_points(rng, 16, 3), 3);
  LpviConfig cfg;
  cfg.k = 16;  // m == k
  CHECK_THROWS_AS(lpvi(c, cfg), CloudTooSmall);
}

TEST_CASE("lpvi: coplanar grid routes every neighborhood to the 2D branch") {
  PointCloud grid = planar_grid(10, 10);
  LpviConfig cfg;
  cfg.k = 16;
  cfg.k_prime = 8;
  LpviResult r = lpvi(grid, cfg);

  CHECK(r.report.accepted_3d == 0);
  CHECK(r.report.fallback_2d == r.report.processed() - r.report.skipped);
  CHECK(r.report.fallback_2d > 0);
  CHECK(r.report.points_added > 0);
  for (std::size_t i = grid.size(); i < r.interpolated.size(); ++i)
    CHECK(std::abs(r.interpolated[i].z) <= 1e-9);
}

TEST_CASE("lpvi: originals preserved, visited-once, deterministic") {
  PointCloud cloud = sphere_cloud(120, 9001);
  LpviConfig cfg;
  LpviResult a = lpvi(cloud, cfg);
  LpviResult b = lpvi(cloud, cfg);

  // Input preservation, exact and in order.
  REQUIRE(a.interpolated.size() >= cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    CHECK(dist_sq(a.interpolated[i], cloud[i]) == 0.0);

  // Determinism: byte-identical runs.
  REQUIRE(a.interpolated.size() == b.interpolated.size());
  for (std::size_t i = 0; i < a.interpolated.size(); ++i)
    CHECK(dist_sq(a.interpolated[i], b.interpolated[i]) == 0.0);
  CHECK(a.report.accepted_3d == b.report.accepted_3d);
  CHECK(a.report.fallback_2d == b.report.fallback_2d);

  // Each point is the center of at most one neighborhood.
  std::vector<int> center_count(cloud.size(), 0);
  for (const auto& n : a.report.neighborhoods) ++center_count[n.center];
  for (int c : center_count) CHECK(c <= 1);

  // Report bookkeeping adds up.
  int added = 0;
  for (const auto& n : a.report.neighborhoods) added += n.added_count;
  CHECK(added == a.report.points_added);
  CHECK(a.report.processed() == static_cast<int>(a.report.neighborhoods.size()));
}

TEST_CASE("lpvi: sphere fixture re-verification (3D safety, 2D planarity, locality)") {
  PointCloud cloud = sphere_cloud(200, 20250811);
  LpviConfig cfg;  // K=16, K'=8, tau=0.5
  LpviResult r = lpvi(cloud, cfg);
  const auto& added = r.interpolated.points;

  for (const LpviNeighborhood& n : r.report.neighborhoods) {
    std::vector<Index> neigh = knn(cloud, n.center, cfg.k);
    double kth = std::sqrt(dist_sq(cloud[neigh.back()], cloud[n.center]));

    // Locality: every added point stays within locality_factor * kth of its
    // center (2D-branch candidates live inside the smaller K' neighborhood).
    for (int j = 0; j < n.added_count; ++j) {
      const Point& p = added[r.original_count + n.added_begin + j];
      CHECK(std::sqrt(dist_sq(p, cloud[n.center])) <=
            cfg.locality_factor * kth * (1.0 + 1e-9));
    }

    if (n.branch == LpviBranch::Accepted3d) {
      // Recompute TopoDiff of the recorded neighborhood and its additions.
      std::vector<Point> x_l{cloud[n.center]};
      for (Index i : neigh) x_l.push_back(cloud[i]);
      std::vector<Point> x_hat = x_l;
      for (int j = 0; j < n.added_count; ++j)
        x_hat.push_back(added[r.original_count + n.added_begin + j]);
      double inv = 1.0 / kth;
      std::vector<Point> sa, sb;
      for (const Point& p : x_l) sa.push_back(p * inv);
      for (const Point& p : x_hat) sb.push_back(p * inv);
      double td = topo_diff(PointCloud{sa, 3}, PointCloud{sb, 3});
      CHECK(td < cfg.tau);
      CHECK(td == doctest::Approx(n.topo_diff_value).epsilon(1e-9));
    } else if (n.branch == LpviBranch::Fallback2d && n.added_count > 0) {
      // Added points lie on the neighborhood's PCA plane.
      std::vector<Index> neigh2 = knn(cloud, n.center, cfg.k_prime);
      std::vector<Point> local{cloud[n.center]};
      double diameter = 0.0;
      for (Index i : neigh2) local.push_back(cloud[i]);
      for (std::size_t a = 0; a < local.size(); ++a)
        for (std::size_t b = a + 1; b < local.size(); ++b)
          diameter = std::max(diameter, std::sqrt(dist_sq(local[a], local[b])));
      PcaProjection proj = pca_3to2(PointCloud{local, 3});
      Vec3 normal = proj.frame.u1.cross(proj.frame.u2);
      for (int j = 0; j < n.added_count; ++j) {
        const Point& p = added[r.original_count + n.added_begin + j];
        double off = std::abs((p - proj.frame.origin).dot(normal));
        CHECK(off <= 1e-9 * diameter);
      }
    }
  }
}

TEST_CASE("lpvi: bookkeeping holds on generic random clouds") {
  Rng rng(404040);
  for (int trial = 0; trial < 3; ++trial) {
    PointCloud cloud =
        make_cloud(topokit::testing::random_points(rng, 60 + 20 * trial, 3), 3);
    LpviConfig cfg;
    cfg.k = 10;
    cfg.k_prime = 5;
    LpviResult r = lpvi(cloud, cfg);
    CHECK(r.report.processed() ==
          static_cast<int>(r.report.neighborhoods.size()));
    int added = 0;
    for (const auto& n : r.report.neighborhoods) {
      added += n.added_count;
      if (n.branch == LpviBranch::Accepted3d) {
        CHECK(n.topo_diff_evaluated);
        CHECK(n.topo_diff_value < cfg.tau);
      }
    }
    CHECK(added == r.report.points_added);
    CHECK(r.interpolated.size() == cloud.size() + added);
  }
}

TEST_CASE("lpvi: added points deduplicated within 1e-9") {
  PointCloud grid = planar_grid(8, 8);
  LpviConfig cfg;
  cfg.k = 12;
  cfg.k_prime = 6;
  LpviResult r = lpvi(grid, cfg);
  for (std::size_t i = r.original_count; i < r.interpolated.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      CHECK(dist_sq(r.interpolated[i], r.interpolated[j]) > 1e-18);
}
