#include "topokit/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "test_support.hpp"

using namespace topokit;
using topokit::testing::Rng;

namespace {

std::vector<Point> regular_tetrahedron() {
  const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  return {{0, 0, 0}, {1, 0, 0}, {0.5, s3 / 2, 0}, {0.5, s3 / 6, s6 / 3}};
}

bool sphere_strictly_contains(const Circumsphere& cs, const Point& p, double slack) {
  return dist_sq(p, cs.center) < cs.radius_sq * (1.0 - slack);
}

}  // namespace

TEST_CASE("circumsphere: unit edge midpoint") {
  PointCloud c = make_cloud({{0, 0, 0}, {1, 0, 0}}, 3);
  Circumsphere cs = circumsphere(Simplex{0, 1}, c);
  CHECK(cs.radius_sq == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cs.center.x == doctest::Approx(0.5));
}

TEST_CASE("circumsphere: right triangle legs 1,1 has radius_sq 0.5") {
  PointCloud c = make_cloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, 2);
  Circumsphere cs = circumsphere(Simplex{0, 1, 2}, c);
  CHECK(cs.radius_sq == doctest::Approx(0.5).epsilon(1e-12));
  // Thales: center is the hypotenuse midpoint.
  CHECK(cs.center.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cs.center.y == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("circumsphere: regular tetrahedron edge 1 -> 3/8") {
  PointCloud c = make_cloud(regular_tetrahedron(), 3);
  Circumsphere cs = circumsphere(Simplex{0, 1, 2, 3}, c);
  CHECK(std::abs(cs.radius_sq - 0.375) <= 1e-12);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(dist_sq(c[i], cs.center) - cs.radius_sq) <=
          1e-9 * (1.0 + cs.radius_sq));
}

TEST_CASE("circumsphere: collinear triangle is degenerate") {
  PointCloud c = make_cloud({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, 3);
  CHECK_THROWS_AS(circumsphere(Simplex{0, 1, 2}, c), DegenerateSimplex);
}

TEST_CASE("circumsphere equidistance on random simplices") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform_int(2, 4);
    PointCloud c = make_cloud(topokit::testing::random_points(rng, n, 3), 3);
    if (static_cast<int>(c.size()) < n) continue;
    std::vector<Index> verts;
    for (int i = 0; i < n; ++i) verts.push_back(i);
    Circumsphere cs;
    try {
      cs = circumsphere(Simplex(verts), c);
    } catch (const DegenerateSimplex&) {
      continue;
    }
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(dist_sq(c[i], cs.center) - cs.radius_sq) <=
            1e-9 * (1.0 + cs.radius_sq));
  }
}

TEST_CASE("circumradius gradient matches finite differences") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    int n = rng.uniform_int(2, 4);
    std::vector<Point> pts = topokit::testing::random_points(rng, n, 3);
    PointCloud c{pts, 3};
    std::vector<Index> verts;
    for (int i = 0; i < n; ++i) verts.push_back(i);
    Simplex s(verts);
    std::vector<Vec3> grad;
    try {
      grad = circumradius_sq_gradient(s, c);
    } catch (const DegenerateSimplex&) {
      continue;
    }
    const double h = 1e-6;
    for (int vi = 0; vi < n; ++vi) {
      for (int ch = 0; ch < 3; ++ch) {
        auto shifted = [&](double delta) {
          PointCloud cc{pts, 3};
          if (ch == 0) cc.points[vi].x += delta;
          if (ch == 1) cc.points[vi].y += delta;
          if (ch == 2) cc.points[vi].z += delta;
          return circumsphere(s, cc).radius_sq;
        };
        double fd = (shifted(h) - shifted(-h)) / (2 * h);
        double an = ch == 0 ? grad[vi].x : (ch == 1 ? grad[vi].y : grad[vi].z);
        CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("delaunay: unit regular tetrahedron -> single cell") {
  PointCloud c = make_cloud(regular_tetrahedron(), 3);
  std::vector<Simplex> cells = delaunay(c);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0] == Simplex{0, 1, 2, 3});
}

TEST_CASE("delaunay: coplanar points passed as 3D are degenerate") {
  PointCloud c = make_cloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, 3);
  CHECK_THROWS_AS(delaunay(c), DegenerateInput);
}

TEST_CASE("delaunay: empty-circumsphere property on random clouds") {
  Rng rng(123);
  for (int trial = 0; trial < 8; ++trial) {
    int n = trial < 4 ? 20 : 50;
    PointCloud c = make_cloud(topokit::testing::random_points(rng, n, 3), 3);
    std::vector<Simplex> cells = delaunay(c);
    CHECK(cells.size() > 0);
    std::vector<char> seen(c.size(), 0);
    for (const Simplex& cell : cells) {
      Circumsphere cs = circumsphere(cell, c);
      for (std::size_t p = 0; p < c.size(); ++p) {
        if (cell.contains(static_cast<Index>(p))) {
          seen[p] = 1;
          continue;
        }
        CHECK(!sphere_strictly_contains(cs, c[p], 1e-7));
      }
    }
    for (std::size_t p = 0; p < c.size(); ++p) CHECK(seen[p]);
  }
}

TEST_CASE("delaunay: 2D empty circumcircle") {
  Rng rng(5);
  PointCloud c = make_cloud(topokit::testing::random_points(rng, 30, 2), 2);
  std::vector<Simplex> tris = delaunay(c);
  CHECK(tris.size() > 0);
  for (const Simplex& t : tris) {
    Circumsphere cs = circumsphere(t, c);
    for (std::size_t p = 0; p < c.size(); ++p) {
      if (t.contains(static_cast<Index>(p))) continue;
      CHECK(!sphere_strictly_contains(cs, c[p], 1e-7));
    }
  }
}

TEST_CASE("voronoi_cell_vertices: cross neighborhood") {
  PointCloud c = make_cloud({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}, 2);
  std::vector<Point> cell = voronoi_cell_vertices(c, 0);
  REQUIRE(cell.size() == 4);
  for (const Point& v : cell) {
    CHECK(std::abs(std::abs(v.x) - 0.5) <= 1e-9);
    CHECK(std::abs(std::abs(v.y) - 0.5) <= 1e-9);
  }
}

TEST_CASE("voronoi_cell_vertices: hull site with everything filtered") {
  // Collinear-ish wedge: the hull corner's incident circumcenters blow far
  // outside the locality cap.
  PointCloud c = make_cloud(
      {{0, 0, 0}, {1, 0.001, 0}, {2, 0, 0}, {1, -0.001, 0}}, 2);
  std::vector<Point> cell = voronoi_cell_vertices(c, 0, 0.1);
  CHECK(cell.empty());
}

TEST_CASE("voronoi_cell_vertices: octahedron center sees 8 cells") {
  PointCloud c = make_cloud({{0, 0, 0},
                             {1, 0, 0},
                             {-1, 0, 0},
                             {0, 1, 0},
                             {0, -1, 0},
                             {0, 0, 1},
                             {0, 0, -1}},
                            3);
  std::vector<Point> cell = voronoi_cell_vertices(c, 0);
  CHECK(cell.size() == 8);
  for (const Point& v : cell) {
    CHECK(std::abs(std::abs(v.x) - 0.5) <= 1e-9);
    CHECK(std::abs(std::abs(v.y) - 0.5) <= 1e-9);
    CHECK(std::abs(std::abs(v.z) - 0.5) <= 1e-9);
  }
}

TEST_CASE("voronoi_cell_vertices: invariant under permutation of non-site points") {
  Rng rng(99);
  std::vector<Point> pts = topokit::testing::random_points(rng, 12, 3);
  PointCloud c = make_cloud(pts, 3);
  std::vector<Point> base = voronoi_cell_vertices(c, 0);

  std::vector<Point> shuffled{pts[0]};
  for (int i = static_cast<int>(pts.size()) - 1; i >= 1; --i)
    shuffled.push_back(pts[i]);
  PointCloud c2 = make_cloud(shuffled, 3);
  std::vector<Point> perm = voronoi_cell_vertices(c2, 0);

  REQUIRE(base.size() == perm.size());
  for (const Point& p : base) {
    bool found = false;
    for (const Point& q : perm)
      if (dist_sq(p, q) <= 1e-18) found = true;
    CHECK(found);
  }
}

TEST_CASE("pca_3to2: flat plane preserves distances and round-trips") {
  Rng rng(17);
  std::vector<Point> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({rng.uniform(), rng.uniform(), 0.0});
  PointCloud c{pts, 3};
  PcaProjection proj = pca_3to2(c);
  CHECK(std::abs(proj.frame.u1.norm() - 1.0) <= 1e-10);
  CHECK(std::abs(proj.frame.u2.norm() - 1.0) <= 1e-10);
  CHECK(std::abs(proj.frame.u1.dot(proj.frame.u2)) <= 1e-10);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d3 = std::sqrt(dist_sq(pts[i], pts[j]));
      double d2 = (proj.projected[i] - proj.projected[j]).norm();
      CHECK(std::abs(d3 - d2) <= 1e-10);
    }
    Point back = lift_2to3(proj.projected[i], proj.frame);
    CHECK(dist_sq(back, pts[i]) <= 1e-20);
  }
}

TEST_CASE("pca_3to2: collinear input is rank deficient") {
  PointCloud c = make_cloud({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}}, 3);
  CHECK_THROWS_AS(pca_3to2(c), RankDeficient);
}

TEST_CASE("pca_3to2: noisy plane reconstruction residual") {
  Rng rng(31);
  std::vector<Point> pts;
  const int n = 20;
  for (int i = 0; i < n; ++i)
    pts.push_back({rng.uniform(), rng.uniform(), 0.001 * (rng.uniform() - 0.5)});
  PointCloud c{pts, 3};
  PcaProjection proj = pca_3to2(c);
  for (int i = 0; i < n; ++i) {
    Point back = lift_2to3(proj.projected[i], proj.frame);
    CHECK(std::sqrt(dist_sq(back, pts[i])) <= 0.001 * std::sqrt(double(n)));
  }
}

TEST_CASE("lift_2to3 basics") {
  PcaFrame frame;
  frame.origin = {1, 1, 1};
  frame.u1 = {0, 1, 0};
  frame.u2 = {0, 0, 1};
  Point zero = lift_2to3({0, 0}, frame);
  CHECK(dist_sq(zero, frame.origin) == 0.0);
  Point moved = lift_2to3({1, 0}, frame);
  CHECK(moved.x == doctest::Approx(1.0));
  CHECK(moved.y == doctest::Approx(2.0));
  CHECK(moved.z == doctest::Approx(1.0));
}

TEST_CASE("knn: sorted by distance, ties by index") {
  PointCloud line = make_cloud({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, 3);
  std::vector<Index> got = knn(line, 0, 2);
  CHECK(got == std::vector<Index>{1, 2});

  PointCloud ties = make_cloud({{0, 0, 0}, {0, 2, 0}, {2, 0, 0}, {0, -2, 0}}, 3);
  std::vector<Index> t = knn(ties, 0, 3);
  CHECK(t == std::vector<Index>{1, 2, 3});

  CHECK_THROWS_AS(knn(line, 0, 4), KTooLarge);
}

TEST_CASE("knn agrees with exhaustive sort oracle") {
  Rng rng(2024);
  PointCloud c = make_cloud(topokit::testing::random_points(rng, 100, 3), 3);
  for (int trial = 0; trial < 10; ++trial) {
    Index center = rng.uniform_int(0, static_cast<int>(c.size()) - 1);
    int k = rng.uniform_int(1, static_cast<int>(c.size()) - 1);
    std::vector<std::pair<double, Index>> all;
    for (Index i = 0; i < static_cast<Index>(c.size()); ++i)
      if (i != center) all.emplace_back(dist_sq(c[i], c[center]), i);
    std::sort(all.begin(), all.end());
    std::vector<Index> expect;
    for (int i = 0; i < k; ++i) expect.push_back(all[i].second);
    CHECK(knn(c, center, k) == expect);
  }
}
