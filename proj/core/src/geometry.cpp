#include "topokit/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

namespace topokit {

int thread_budget() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("TOPOKIT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<int>(std::min<long>(v, hw));
  }
  return hw;
}

// ---------------------------------------------------------------------------
// types.hpp helpers
// ---------------------------------------------------------------------------

Simplex::Simplex(std::initializer_list<Index> verts) {
  for (Index i : verts) {
    if (n >= 4) throw InvalidComplex("simplex has more than 4 vertices");
    v[n++] = i;
  }
  std::sort(v.begin(), v.begin() + n);
  for (int i = 1; i < n; ++i)
    if (v[i] == v[i - 1]) throw InvalidComplex("repeated vertex in simplex");
}

Simplex::Simplex(const std::vector<Index>& verts) {
  for (Index i : verts) {
    if (n >= 4) throw InvalidComplex("simplex has more than 4 vertices");
    v[n++] = i;
  }
  std::sort(v.begin(), v.begin() + n);
  for (int i = 1; i < n; ++i)
    if (v[i] == v[i - 1]) throw InvalidComplex("repeated vertex in simplex");
}

Simplex Simplex::face_opposite(int i) const {
  Simplex f;
  for (int j = 0; j < n; ++j)
    if (j != i) f.v[f.n++] = v[j];
  return f;
}

std::string Simplex::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

PointCloud make_cloud(std::vector<Point> pts, int dim) {
  if (dim != 2 && dim != 3) throw DegenerateInput("cloud dimension must be 2 or 3");
  for (const Point& p : pts) {
    if (!p.finite()) throw DegenerateInput("non-finite coordinate in point cloud");
    if (dim == 2 && p.z != 0.0) throw DegenerateInput("2D cloud with nonzero z");
  }
  // Dedup within 1e-12; quadratic scan is fine at desk scale.
  std::vector<Point> kept;
  kept.reserve(pts.size());
  for (const Point& p : pts) {
    bool dup = false;
    for (const Point& q : kept)
      if (dist_sq(p, q) <= kDedupToleranceSq) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(p);
  }
  return PointCloud{std::move(kept), dim};
}

PointCloud make_cloud_2d(const std::vector<Vec2>& pts) {
  std::vector<Point> p3;
  p3.reserve(pts.size());
  for (const Vec2& p : pts) p3.push_back({p.x, p.y, 0.0});
  return make_cloud(std::move(p3), 2);
}

// ---------------------------------------------------------------------------
// Affine rank / basis
// ---------------------------------------------------------------------------

namespace {

Eigen::Matrix3d covariance_about_centroid(const PointCloud& cloud, Vec3* centroid_out) {
  Vec3 c{0, 0, 0};
  for (const Point& p : cloud.points) c = c + p;
  c = c / static_cast<double>(cloud.size());
  if (centroid_out) *centroid_out = c;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Point& p : cloud.points) {
    Eigen::Vector3d d(p.x - c.x, p.y - c.y, p.z - c.z);
    cov += d * d.transpose();
  }
  return cov / static_cast<double>(cloud.size());
}

// Deterministic sign: flip so the largest-magnitude component is positive.
Eigen::Vector3d canonical_sign(Eigen::Vector3d v) {
  int arg = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0) v = -v;
  return v;
}

}  // namespace

int affine_rank(const PointCloud& cloud, double rel_tol) {
  return detail::affine_basis(cloud, rel_tol).rank;
}

namespace detail {

AffineBasis affine_basis(const PointCloud& cloud, double rel_tol) {
  AffineBasis basis;
  if (cloud.size() == 0) throw DegenerateInput("empty point cloud");
  Vec3 centroid;
  Eigen::Matrix3d cov = covariance_about_centroid(cloud, &centroid);
  basis.origin = centroid;
  if (cloud.size() == 1) {
    basis.rank = 0;
    return basis;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  // Ascending eigenvalues from Eigen; reorder descending.
  std::array<int, 3> idx{2, 1, 0};
  double lead = std::max(es.eigenvalues()[2], 0.0);
  // Eigenvalues scale with squared lengths, so the spread tolerance is
  // rel_tol^2 relative to the leading one.
  double cutoff = lead * rel_tol * rel_tol;
  for (int r : idx) {
    double ev = es.eigenvalues()[r];
    if (ev > cutoff && ev > 0.0) {
      Eigen::Vector3d a = canonical_sign(es.eigenvectors().col(r));
      basis.axes.push_back({a[0], a[1], a[2]});
    }
  }
  basis.rank = static_cast<int>(basis.axes.size());
  return basis;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Circumspheres
// ---------------------------------------------------------------------------

namespace {

constexpr double kConditionLimit = 1e12;

// Solves the equidistance system in the simplex's affine hull via the Gram
// matrix of edge vectors. Returns barycentric-style weights x for
// center = p0 + sum x_i (p_i - p0).
std::vector<double> circumcenter_weights(const std::vector<Vec3>& edges) {
  const int k = static_cast<int>(edges.size());
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) gram(i, j) = 2.0 * edges[i].dot(edges[j]);
    rhs(i) = edges[i].norm_sq();
  }
  // Hadamard condition proxy: product of row norms over |det|.
  double det = gram.determinant();
  double hadamard = 1.0;
  for (int i = 0; i < k; ++i) hadamard *= gram.row(i).norm();
  if (det == 0.0 || !(std::abs(det) * kConditionLimit >= hadamard))
    throw DegenerateSimplex("circumsphere system ill-conditioned");
  Eigen::VectorXd x = gram.fullPivLu().solve(rhs);
  std::vector<double> w(k);
  for (int i = 0; i < k; ++i) w[i] = x(i);
  return w;
}

}  // namespace

Circumsphere circumsphere(const Simplex& s, const PointCloud& cloud) {
  if (s.n < 2 || s.n > 4) throw DegenerateSimplex("circumsphere needs a 1/2/3-simplex");
  const Point& p0 = cloud[s[0]];
  if (s.n == 2) {
    const Point& p1 = cloud[s[1]];
    Vec3 d = p1 - p0;
    double len_sq = d.norm_sq();
    if (len_sq == 0.0) throw DegenerateSimplex("zero-length edge");
    return {p0 + d * 0.5, len_sq * 0.25};
  }
  std::vector<Vec3> edges;
  for (int i = 1; i < s.n; ++i) edges.push_back(cloud[s[i]] - p0);
  std::vector<double> w = circumcenter_weights(edges);
  Vec3 offset{0, 0, 0};
  for (std::size_t i = 0; i < edges.size(); ++i) offset = offset + edges[i] * w[i];
  return {p0 + offset, offset.norm_sq()};
}

std::vector<Vec3> circumradius_sq_gradient(const Simplex& s, const PointCloud& cloud) {
  std::vector<Vec3> grad(s.n, Vec3{0, 0, 0});
  if (s.n == 2) {
    Vec3 d = cloud[s[0]] - cloud[s[1]];
    grad[0] = d * 0.5;
    grad[1] = d * -0.5;
    return grad;
  }
  if (s.n == 3) {
    // R^2 = e1 e2 e3 / (2 e1 e2 + 2 e2 e3 + 2 e3 e1 - e1^2 - e2^2 - e3^2)
    // with e_i the squared edge lengths opposite vertex i.
    const Point& a = cloud[s[0]];
    const Point& b = cloud[s[1]];
    const Point& c = cloud[s[2]];
    double e1 = dist_sq(b, c), e2 = dist_sq(c, a), e3 = dist_sq(a, b);
    double f = 2 * (e1 * e2 + e2 * e3 + e3 * e1) - e1 * e1 - e2 * e2 - e3 * e3;
    if (f <= 0.0) throw DegenerateSimplex("degenerate triangle");
    double num = e1 * e2 * e3;
    auto dr_de = [&](double ej, double ek, double dfi) {
      return (ej * ek * f - num * dfi) / (f * f);
    };
    double df1 = 2 * (e2 + e3 - e1);
    double df2 = 2 * (e1 + e3 - e2);
    double df3 = 2 * (e1 + e2 - e3);
    double g1 = dr_de(e2, e3, df1);
    double g2 = dr_de(e1, e3, df2);
    double g3 = dr_de(e1, e2, df3);
    // e1 = |b-c|^2 etc.; chain rule into vertex coordinates.
    Vec3 bc = (b - c) * 2.0, ca = (c - a) * 2.0, ab = (a - b) * 2.0;
    grad[0] = ca * -g2 + ab * g3;
    grad[1] = bc * g1 + ab * -g3;
    grad[2] = bc * -g1 + ca * g2;
    return grad;
  }
  // Tetrahedron: implicit differentiation of 2 G x = rhs with
  // G_ij = e_i . e_j, rhs_i = |e_i|^2, R^2 = |sum x_i e_i|^2.
  const Point& p0 = cloud[s[0]];
  std::vector<Vec3> edges;
  for (int i = 1; i < 4; ++i) edges.push_back(cloud[s[i]] - p0);
  std::vector<double> w = circumcenter_weights(edges);
  Vec3 offset{0, 0, 0};
  for (int i = 0; i < 3; ++i) offset = offset + edges[i] * w[i];

  Eigen::Matrix3d gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram(i, j) = 2.0 * edges[i].dot(edges[j]);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(gram);

  // Perturbing coordinate c of simplex vertex vi changes edges and rhs;
  // dR^2 = 2 offset . d(offset), d(offset) = sum dx_i e_i + x_i d(e_i),
  // with dx solved from gram * dx = d(rhs) - d(gram) x.
  for (int vi = 0; vi < 4; ++vi) {
    for (int c = 0; c < 3; ++c) {
      std::array<Vec3, 3> dedges{Vec3{}, Vec3{}, Vec3{}};
      for (int i = 0; i < 3; ++i) {
        double de = 0.0;
        if (vi == i + 1) de = 1.0;
        if (vi == 0) de = -1.0;
        if (c == 0) dedges[i].x = de;
        if (c == 1) dedges[i].y = de;
        if (c == 2) dedges[i].z = de;
      }
      Eigen::Vector3d drhs, rhs_shift;
      Eigen::Matrix3d dgram;
      for (int i = 0; i < 3; ++i) {
        drhs(i) = 2.0 * edges[i].dot(dedges[i]);
        for (int j = 0; j < 3; ++j)
          dgram(i, j) = 2.0 * (dedges[i].dot(edges[j]) + edges[i].dot(dedges[j]));
      }
      Eigen::Vector3d xv(w[0], w[1], w[2]);
      Eigen::Vector3d dx = lu.solve(drhs - dgram * xv);
      Vec3 doffset{0, 0, 0};
      for (int i = 0; i < 3; ++i)
        doffset = doffset + edges[i] * dx(i) + dedges[i] * w[i];
      double dr2 = 2.0 * offset.dot(doffset);
      if (c == 0) grad[vi].x = dr2;
      if (c == 1) grad[vi].y = dr2;
      if (c == 2) grad[vi].z = dr2;
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Voronoi cell vertices
// ---------------------------------------------------------------------------

std::vector<Point> voronoi_cell_vertices(const PointCloud& cloud, Index site,
                                         double locality_factor) {
  std::vector<Simplex> cells = delaunay(cloud);
  std::sort(cells.begin(), cells.end());

  double reach_sq = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (static_cast<Index>(i) != site)
      reach_sq = std::max(reach_sq, dist_sq(cloud[i], cloud[site]));
  double cap_sq = locality_factor * locality_factor * reach_sq;

  std::vector<Point> vertices;
  for (const Simplex& cell : cells) {
    if (!cell.contains(site)) continue;
    Circumsphere cs;
    try {
      cs = circumsphere(cell, cloud);
    } catch (const DegenerateSimplex&) {
      continue;  // sliver beyond the conditioning threshold
    }
    if (dist_sq(cs.center, cloud[site]) > cap_sq) continue;
    bool dup = false;
    for (const Point& q : vertices)
      if (dist_sq(cs.center, q) <= 1e-18) {
        dup = true;
        break;
      }
    if (!dup) vertices.push_back(cs.center);
  }
  return vertices;
}

// ---------------------------------------------------------------------------
// PCA plane fitting
// ---------------------------------------------------------------------------

PcaProjection pca_3to2(const PointCloud& neighborhood) {
  if (neighborhood.size() < 3)
    throw RankDeficient("pca_3to2 needs at least 3 points");
  Eigen::Matrix3d cov = covariance_about_centroid(neighborhood, nullptr);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  double l1 = es.eigenvalues()[2];
  double l2 = es.eigenvalues()[1];
  if (!(l2 >= 1e-12 * l1) || l1 <= 0.0)
    throw RankDeficient("neighborhood is collinear");

  Eigen::Vector3d e1 = canonical_sign(es.eigenvectors().col(2));
  Eigen::Vector3d e2 = canonical_sign(es.eigenvectors().col(1));
  // Re-orthonormalize so the frame invariants hold to 1e-10 regardless of
  // solver round-off.
  e1.normalize();
  e2 = (e2 - e1 * e1.dot(e2)).normalized();

  PcaProjection out;
  out.frame.origin = neighborhood[0];  // center on x_l, not the centroid
  out.frame.u1 = {e1[0], e1[1], e1[2]};
  out.frame.u2 = {e2[0], e2[1], e2[2]};
  out.frame.explained_variance[0] = l1;
  out.frame.explained_variance[1] = l2;
  out.projected.reserve(neighborhood.size());
  for (const Point& p : neighborhood.points) {
    Vec3 d = p - out.frame.origin;
    out.projected.push_back({d.dot(out.frame.u1), d.dot(out.frame.u2)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nearest neighbors
// ---------------------------------------------------------------------------

std::vector<Index> knn(const PointCloud& cloud, Index center, int k) {
  const int m = static_cast<int>(cloud.size());
  if (k >= m) throw KTooLarge("knn: k must be below the cloud size");
  std::vector<std::pair<double, Index>> by_dist;
  by_dist.reserve(m - 1);
  for (Index i = 0; i < m; ++i) {
    if (i == center) continue;
    by_dist.emplace_back(dist_sq(cloud[i], cloud[center]), i);
  }
  std::sort(by_dist.begin(), by_dist.end());
  std::vector<Index> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(by_dist[i].second);
  return out;
}

}  // namespace topokit
