#pragma once

#include <optional>
#include <vector>

#include "topokit/types.hpp"

namespace topokit {

// ---------------------------------------------------------------------------
// Delaunay triangulation (2D/3D)
// ---------------------------------------------------------------------------

// Maximal simplices of the Delaunay triangulation of `cloud` (triangles for
// dim 2, tetrahedra for dim 3). Connectivity decisions run on deterministically
// perturbed copies of the points (index-keyed symbolic tie-breaking), so
// cospherical inputs triangulate reproducibly; all reported values elsewhere
// are computed from the unperturbed coordinates.
//
// Throws DegenerateInput when the points do not affinely span cloud.dim.
std::vector<Simplex> delaunay(const PointCloud& cloud);

// Circumcenter and squared circumradius of a 1/2/3-simplex, computed in the
// simplex's affine hull. Throws DegenerateSimplex when the equidistance system
// is ill-conditioned (Hadamard ratio above 1e12).
struct Circumsphere {
  Point center;
  double radius_sq = 0.0;
};
Circumsphere circumsphere(const Simplex& s, const PointCloud& cloud);

// d(radius_sq)/d(vertex coordinates) for the same simplex, one Vec3 per
// simplex vertex (in simplex order). Exact analytic derivative.
std::vector<Vec3> circumradius_sq_gradient(const Simplex& s, const PointCloud& cloud);

// Finite Voronoi-cell vertices of `site`: circumcenters of incident Delaunay
// maximal simplices, deduplicated within 1e-9, with circumcenters farther from
// the site than locality_factor times the site's farthest-neighbor distance
// discarded (unbounded cells contribute nothing).
std::vector<Point> voronoi_cell_vertices(const PointCloud& cloud, Index site,
                                         double locality_factor = 2.0);

// ---------------------------------------------------------------------------
// PCA plane fitting
// ---------------------------------------------------------------------------

struct PcaFrame {
  Point origin;                 // the center point x_l (first cloud point)
  Vec3 u1, u2;                  // orthonormal top-2 covariance eigenvectors
  double explained_variance[2]; // descending eigenvalues
};

struct PcaProjection {
  PcaFrame frame;
  std::vector<Vec2> projected;
};

// Fits the top-2 principal plane of `neighborhood` (covariance about the
// centroid) and projects every point into frame coordinates anchored at the
// first point, so lift_2to3(project(p)) == p exactly for in-plane points.
// Throws RankDeficient when the second eigenvalue is below 1e-12 of the first.
PcaProjection pca_3to2(const PointCloud& neighborhood);

inline Point lift_2to3(const Vec2& v2, const PcaFrame& frame) {
  return frame.origin + frame.u1 * v2.x + frame.u2 * v2.y;
}

// ---------------------------------------------------------------------------
// Nearest neighbors
// ---------------------------------------------------------------------------

// Indices of the k nearest neighbors of `center` (excluded), ascending by
// Euclidean distance, ties by index. Throws KTooLarge when k >= cloud size.
std::vector<Index> knn(const PointCloud& cloud, Index center, int k);

// Affine rank of the point set with a relative spread tolerance; 0 for a
// single point, 1 for collinear, 2 for coplanar, else 3 (or cloud dim).
int affine_rank(const PointCloud& cloud, double rel_tol = 1e-8);

namespace detail {
// Orthonormal basis of the affine hull (centroid-anchored), used when a
// degenerate cloud must be flattened into its spanned subspace.
struct AffineBasis {
  Point origin;
  std::vector<Vec3> axes;  // `rank` orthonormal directions
  int rank = 0;
};
AffineBasis affine_basis(const PointCloud& cloud, double rel_tol = 1e-8);
}  // namespace detail

}  // namespace topokit
