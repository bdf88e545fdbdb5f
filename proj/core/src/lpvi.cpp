#include "topokit/lpvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topokit/pd_metrics.hpp"

namespace topokit {

namespace {

constexpr double kCandidateDedupSq = 1e-9 * 1e-9;

PointCloud local_cloud(const PointCloud& cloud, Index center,
                       const std::vector<Index>& neighbors) {
  std::vector<Point> pts;
  pts.reserve(neighbors.size() + 1);
  pts.push_back(cloud[center]);
  for (Index i : neighbors) pts.push_back(cloud[i]);
  return PointCloud{std::move(pts), cloud.dim};
}

PointCloud scaled_copy(const std::vector<Point>& pts, double inv_scale) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.push_back(p * inv_scale);
  return PointCloud{std::move(out), 3};
}

}  // namespace

LpviResult lpvi(const PointCloud& cloud, const LpviConfig& cfg) {
  const int m = static_cast<int>(cloud.size());
  if (cloud.dim != 3) throw DegenerateInput("lpvi expects a 3D cloud");
  if (cfg.k < cfg.k_prime || cfg.k_prime < 3 || cfg.tau <= 0.0)
    throw Error("lpvi: config requires k >= k_prime >= 3 and tau > 0");
  if (m < cfg.k + 1)
    throw CloudTooSmall("lpvi: need at least k+1 points, got " + std::to_string(m));

  LpviResult result;
  result.original_count = m;
  std::vector<Point> added;

  auto is_fresh = [&](const Point& p) {
    for (const Point& q : cloud.points)
      if (dist_sq(p, q) <= kCandidateDedupSq) return false;
    for (const Point& q : added)
      if (dist_sq(p, q) <= kCandidateDedupSq) return false;
    return true;
  };

  std::vector<char> visited(m, 0);
  for (Index l = 0; l < m; ++l) {
    if (visited[l]) continue;
    visited[l] = 1;

    LpviNeighborhood rec;
    rec.center = l;
    rec.added_begin = static_cast<int>(added.size());

    std::vector<Index> neigh = knn(cloud, l, cfg.k);
    PointCloud x_l = local_cloud(cloud, l, neigh);
    double kth_dist = std::sqrt(dist_sq(cloud[neigh.back()], cloud[l]));

    // 3D branch: Voronoi vertices of the center within its neighborhood,
    // guarded by the scale-normalized TopoDiff test.
    bool accepted_3d = false;
    if (kth_dist > 0.0) {
      try {
        std::vector<Point> cand = voronoi_cell_vertices(x_l, 0, cfg.locality_factor);
        std::vector<Point> fresh;
        for (const Point& c : cand) {
          bool dup = !is_fresh(c);
          for (const Point& f : fresh)
            if (dist_sq(c, f) <= kCandidateDedupSq) dup = true;
          if (!dup) fresh.push_back(c);
        }
        std::vector<Point> hat = x_l.points;
        hat.insert(hat.end(), fresh.begin(), fresh.end());
        double inv = 1.0 / kth_dist;  // tau is scale-free
        rec.topo_diff_value = topo_diff(scaled_copy(x_l.points, inv),
                                        scaled_copy(hat, inv));
        rec.topo_diff_evaluated = true;
        if (rec.topo_diff_value < cfg.tau) {
          for (Index i : neigh) visited[i] = 1;
          for (const Point& c : fresh) added.push_back(c);
          rec.branch = LpviBranch::Accepted3d;
          accepted_3d = true;
        }
      } catch (const DegenerateInput&) {
        // coplanar/collinear neighborhood: straight to the 2D branch
      } catch (const DegenerateSimplex&) {
      }
    }

    if (!accepted_3d) {
      std::vector<Index> neigh2 = knn(cloud, l, cfg.k_prime);
      PointCloud n2 = local_cloud(cloud, l, neigh2);
      try {
        PcaProjection proj = pca_3to2(n2);
        PointCloud flat{std::vector<Point>(), 2};
        flat.points.reserve(proj.projected.size());
        for (const Vec2& p : proj.projected) flat.points.push_back({p.x, p.y, 0.0});
        std::vector<Point> cand2 = voronoi_cell_vertices(flat, 0, cfg.locality_factor);
        for (const Point& c2 : cand2) {
          Point lifted = lift_2to3(Vec2{c2.x, c2.y}, proj.frame);
          if (is_fresh(lifted)) added.push_back(lifted);
        }
        for (Index i : neigh2) visited[i] = 1;
        rec.branch = LpviBranch::Fallback2d;
      } catch (const DegenerateInput&) {
        rec.branch = LpviBranch::Skipped;  // collinear 2D neighborhood
      } catch (const RankDeficient&) {
        rec.branch = LpviBranch::Skipped;
      } catch (const DegenerateSimplex&) {
        rec.branch = LpviBranch::Skipped;
      }
    }

    rec.added_count = static_cast<int>(added.size()) - rec.added_begin;
    switch (rec.branch) {
      case LpviBranch::Accepted3d: ++result.report.accepted_3d; break;
      case LpviBranch::Fallback2d: ++result.report.fallback_2d; break;
      case LpviBranch::Skipped: ++result.report.skipped; break;
    }
    result.report.neighborhoods.push_back(rec);
  }

  result.report.points_added = static_cast<int>(added.size());
  std::vector<Point> all = cloud.points;
  all.insert(all.end(), added.begin(), added.end());
  result.interpolated = PointCloud{std::move(all), 3};
  return result;
}

}  // namespace topokit
