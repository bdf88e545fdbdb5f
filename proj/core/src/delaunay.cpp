#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "topokit/geometry.hpp"

// Incremental Bowyer-Watson triangulation (2D and 3D) over a one-point
// compactification: hull facets carry ghost cells with a virtual vertex -1,
// so cavity bookkeeping never special-cases the boundary. Connectivity
// predicates run on deterministically perturbed copies of the points
// (index-keyed), which breaks cospherical/cocircular ties reproducibly;
// geometric values reported to callers are always computed from the original
// coordinates.

namespace topokit {
namespace {

constexpr Index kGhost = -1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_hash(std::uint64_t seed) {
  // [-0.5, 0.5), reproducible across platforms (pure integer path).
  return static_cast<double>(splitmix64(seed) >> 11) * (1.0 / 9007199254740992.0) - 0.5;
}

std::vector<Point> perturbed_copy(const PointCloud& cloud) {
  Vec3 lo = cloud[0], hi = cloud[0];
  for (const Point& p : cloud.points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  double scale = (hi - lo).norm() * 1e-9;
  std::vector<Point> out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::uint64_t base = static_cast<std::uint64_t>(i) * 3u;
    out[i] = cloud[i] + Vec3{unit_hash(base), unit_hash(base + 1),
                             cloud.dim == 3 ? unit_hash(base + 2) : 0.0} *
                            scale;
  }
  return out;
}

double orient2d(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double orient3d(const Point& a, const Point& b, const Point& c, const Point& d) {
  Vec3 ab = b - a, ac = c - a, ad = d - a;
  return ab.cross(ac).dot(ad);
}

// Positive iff e lies strictly inside the circle through (a,b,c); stored
// order is irrelevant because the test self-normalizes by orientation.
bool incircle_strict(const Point& a, const Point& b, const Point& c, const Point& e) {
  double o = orient2d(a, b, c);
  if (o == 0.0) return false;
  double ax = a.x - e.x, ay = a.y - e.y;
  double bx = b.x - e.x, by = b.y - e.y;
  double cx = c.x - e.x, cy = c.y - e.y;
  double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
               (bx * bx + by * by) * (ax * cy - ay * cx) +
               (cx * cx + cy * cy) * (ax * by - ay * bx);
  return o > 0.0 ? det > 0.0 : det < 0.0;
}

// Positive iff e lies strictly inside the sphere through (a,b,c,d).
bool insphere_strict(const Point& a, const Point& b, const Point& c,
                     const Point& d, const Point& e) {
  double o = orient3d(a, b, c, d);
  if (o == 0.0) return false;
  std::array<Vec3, 4> r{a - e, b - e, c - e, d - e};
  std::array<double, 4> w;
  for (int i = 0; i < 4; ++i) w[i] = r[i].norm_sq();
  auto det3 = [](const Vec3& u, const Vec3& v, const Vec3& t) {
    return u.cross(v).dot(t);
  };
  double det = w[0] * det3(r[1], r[2], r[3]) - w[1] * det3(r[0], r[2], r[3]) +
               w[2] * det3(r[0], r[1], r[3]) - w[3] * det3(r[0], r[1], r[2]);
  return o > 0.0 ? det > 0.0 : det < 0.0;
}

// Shared cell machinery for D = 3 (triangles) and D = 4 (tetrahedra) vertex
// counts.
template <int D>
struct Mesh {
  struct Cell {
    std::array<Index, D> v;
    std::array<int, D> nbr;  // nbr[i] = cell across the face opposite v[i]
    bool alive = true;
  };

  const std::vector<Point>& pts;  // perturbed coordinates
  std::vector<Cell> cells;

  explicit Mesh(const std::vector<Point>& p) : pts(p) {}

  bool is_ghost(int c) const {
    for (Index vv : cells[c].v)
      if (vv == kGhost) return true;
    return false;
  }

  int ghost_slot(int c) const {
    for (int i = 0; i < D; ++i)
      if (cells[c].v[i] == kGhost) return i;
    return -1;
  }

  using FaceKey = std::array<Index, D - 1>;
  FaceKey face_key(int c, int opposite) const {
    FaceKey key;
    int k = 0;
    for (int i = 0; i < D; ++i)
      if (i != opposite) key[k++] = cells[c].v[i];
    std::sort(key.begin(), key.end());
    return key;
  }

  void wire_all() {
    std::map<FaceKey, std::pair<int, int>> open;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
      if (!cells[c].alive) continue;
      for (int i = 0; i < D; ++i) {
        FaceKey key = face_key(c, i);
        auto it = open.find(key);
        if (it == open.end()) {
          open[key] = {c, i};
        } else {
          cells[c].nbr[i] = it->second.first;
          cells[it->second.first].nbr[it->second.second] = c;
          open.erase(it);
        }
      }
    }
    if (!open.empty()) throw Error("delaunay: unmatched faces while wiring");
  }

  bool conflicts(int c, const Point& p) const {
    const Cell& cell = cells[c];
    int g = ghost_slot(c);
    if (g < 0) {
      if constexpr (D == 4)
        return insphere_strict(pts[cell.v[0]], pts[cell.v[1]], pts[cell.v[2]],
                               pts[cell.v[3]], p);
      else
        return incircle_strict(pts[cell.v[0]], pts[cell.v[1]], pts[cell.v[2]], p);
    }
    // Ghost cell: in conflict iff p lies strictly beyond the hull facet,
    // witnessed by the interior vertex of the inner neighbor.
    int inner = cell.nbr[g];
    std::array<Index, D - 1> face;
    int k = 0;
    for (int i = 0; i < D; ++i)
      if (i != g) face[k++] = cell.v[i];
    Index witness = kGhost;
    for (Index vv : cells[inner].v) {
      bool in_face = false;
      for (Index f : face)
        if (f == vv) in_face = true;
      if (!in_face && vv != kGhost) witness = vv;
    }
    if (witness == kGhost) throw Error("delaunay: ghost without interior witness");
    double sp, sw;
    if constexpr (D == 4) {
      sp = orient3d(pts[face[0]], pts[face[1]], pts[face[2]], p);
      sw = orient3d(pts[face[0]], pts[face[1]], pts[face[2]], pts[witness]);
    } else {
      sp = orient2d(pts[face[0]], pts[face[1]], p);
      sw = orient2d(pts[face[0]], pts[face[1]], pts[witness]);
    }
    if (sp == 0.0) return true;  // coplanar with the hull facet: absorb
    return (sp > 0.0) != (sw > 0.0);
  }

  void insert(Index pi) {
    const Point& p = pts[pi];
    int seed = -1;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c)
      if (cells[c].alive && conflicts(c, p)) {
        seed = c;
        break;
      }
    if (seed < 0) throw Error("delaunay: no conflict cell found for insertion");

    // Grow the conflict region across faces.
    std::vector<int> region{seed};
    std::vector<char> in_region(cells.size(), 0);
    in_region[seed] = 1;
    for (std::size_t head = 0; head < region.size(); ++head) {
      int c = region[head];
      for (int i = 0; i < D; ++i) {
        int n = cells[c].nbr[i];
        if (!in_region[n] && cells[n].alive && conflicts(n, p)) {
          in_region[n] = 1;
          region.push_back(n);
        }
      }
    }

    // Boundary faces (conflict cell side) -> one new cell each.
    struct Boundary {
      std::array<Index, D - 1> face;
      int outside;
      int outside_slot;
    };
    std::vector<Boundary> boundary;
    for (int c : region) {
      for (int i = 0; i < D; ++i) {
        int n = cells[c].nbr[i];
        if (in_region[n]) continue;
        Boundary b;
        int k = 0;
        for (int j = 0; j < D; ++j)
          if (j != i) b.face[k++] = cells[c].v[j];
        b.outside = n;
        b.outside_slot = -1;
        for (int j = 0; j < D; ++j)
          if (cells[n].nbr[j] == c) b.outside_slot = j;
        boundary.push_back(b);
      }
    }
    for (int c : region) cells[c].alive = false;

    std::map<std::array<Index, D - 1>, std::pair<int, int>> open;
    for (const Boundary& b : boundary) {
      Cell fresh;
      for (int i = 0; i < D - 1; ++i) fresh.v[i] = b.face[i];
      fresh.v[D - 1] = pi;
      fresh.nbr.fill(-1);
      int id = static_cast<int>(cells.size());
      cells.push_back(fresh);
      in_region.push_back(0);
      cells[id].nbr[D - 1] = b.outside;
      cells[b.outside].nbr[b.outside_slot] = id;
      // Faces containing p pair up between sibling new cells.
      for (int i = 0; i < D - 1; ++i) {
        std::array<Index, D - 1> key;
        int k = 0;
        for (int j = 0; j < D - 1; ++j)
          if (j != i) key[k++] = b.face[j];
        key[D - 2] = pi;
        std::sort(key.begin(), key.end());
        auto it = open.find(key);
        if (it == open.end()) {
          open[key] = {id, i};
        } else {
          cells[id].nbr[i] = it->second.first;
          cells[it->second.first].nbr[it->second.second] = id;
          open.erase(it);
        }
      }
    }
    if (!open.empty()) throw Error("delaunay: cavity rebuild left open faces");
  }

  std::vector<Simplex> finite_cells() const {
    std::vector<Simplex> out;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
      if (!cells[c].alive || is_ghost(c)) continue;
      std::vector<Index> verts(cells[c].v.begin(), cells[c].v.end());
      out.emplace_back(verts);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

std::vector<Simplex> delaunay3(const PointCloud& cloud,
                               const std::vector<Point>& pts) {
  const int n = static_cast<int>(cloud.size());
  // Well-conditioned initial tetrahedron, deterministic ties by index.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = 0.0;
  for (int i = 1; i < n; ++i) {
    double d = dist_sq(cloud[i], cloud[i0]);
    if (d > best) best = d, i1 = i;
  }
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    double a = (cloud[i1] - cloud[i0]).cross(cloud[i] - cloud[i0]).norm_sq();
    if (a > best) best = a, i2 = i;
  }
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    double v = std::abs(orient3d(cloud[i0], cloud[i1], cloud[i2], cloud[i]));
    if (v > best) best = v, i3 = i;
  }
  if (i1 < 0 || i2 < 0 || i3 < 0 || best == 0.0)
    throw DegenerateInput("delaunay: points do not span 3D");

  Mesh<4> mesh(pts);
  Mesh<4>::Cell first;
  first.v = {i0, i1, i2, i3};
  first.nbr.fill(-1);
  mesh.cells.push_back(first);
  for (int f = 0; f < 4; ++f) {
    Mesh<4>::Cell ghost;
    int k = 0;
    for (int j = 0; j < 4; ++j)
      if (j != f) ghost.v[k++] = first.v[j];
    ghost.v[3] = kGhost;
    ghost.nbr.fill(-1);
    mesh.cells.push_back(ghost);
  }
  mesh.wire_all();
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    mesh.insert(i);
  }
  return mesh.finite_cells();
}

std::vector<Simplex> delaunay2(const PointCloud& cloud,
                               const std::vector<Point>& pts) {
  const int n = static_cast<int>(cloud.size());
  int i0 = 0, i1 = -1, i2 = -1;
  double best = 0.0;
  for (int i = 1; i < n; ++i) {
    double d = dist_sq(cloud[i], cloud[i0]);
    if (d > best) best = d, i1 = i;
  }
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    double a = std::abs(orient2d(cloud[i0], cloud[i1], cloud[i]));
    if (a > best) best = a, i2 = i;
  }
  if (i1 < 0 || i2 < 0 || best == 0.0)
    throw DegenerateInput("delaunay: points do not span 2D");

  Mesh<3> mesh(pts);
  Mesh<3>::Cell first;
  first.v = {i0, i1, i2};
  first.nbr.fill(-1);
  mesh.cells.push_back(first);
  for (int f = 0; f < 3; ++f) {
    Mesh<3>::Cell ghost;
    int k = 0;
    for (int j = 0; j < 3; ++j)
      if (j != f) ghost.v[k++] = first.v[j];
    ghost.v[2] = kGhost;
    ghost.nbr.fill(-1);
    mesh.cells.push_back(ghost);
  }
  mesh.wire_all();
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    mesh.insert(i);
  }
  return mesh.finite_cells();
}

}  // namespace

std::vector<Simplex> delaunay(const PointCloud& cloud) {
  if (cloud.size() < static_cast<std::size_t>(cloud.dim) + 1)
    throw DegenerateInput("delaunay: need at least dim+1 points");
  if (affine_rank(cloud) < cloud.dim)
    throw DegenerateInput("delaunay: points are affinely dependent");
  std::vector<Point> pts = perturbed_copy(cloud);
  return cloud.dim == 3 ? delaunay3(cloud, pts) : delaunay2(cloud, pts);
}

}  // namespace topokit
