#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace topokit {

using Index = int;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geometry
struct DegenerateInput : Error { using Error::Error; };
struct DegenerateSimplex : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };

// Persistence
struct MissingVertexValue : Error { using Error::Error; };
struct NonMonotoneFiltration : Error { using Error::Error; };
struct ComplexTooLarge : Error { using Error::Error; };
struct InvalidComplex : Error { using Error::Error; };

// Diagram metrics
struct UncappedInfiniteBar : Error { using Error::Error; };
struct DiagramTooLarge : Error { using Error::Error; };

// LPVI
struct CloudTooSmall : Error { using Error::Error; };
struct KTooLarge : Error { using Error::Error; };

// PersLoss
struct ImageTooSmall : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// I/O
struct ParseError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Points and clouds
// ---------------------------------------------------------------------------

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm_sq() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm_sq()); }
};

// 3D vector; 2D clouds keep z == 0 so distances work uniformly.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

using Point = Vec3;

inline double dist_sq(const Vec3& a, const Vec3& b) { return (a - b).norm_sq(); }

// Finite ordered point set of ambient dimension 2 or 3. Construction via
// make_cloud dedups coincident points (1e-12) so indices are stable afterwards.
struct PointCloud {
  std::vector<Point> points;
  int dim = 3;

  std::size_t size() const { return points.size(); }
  const Point& operator[](std::size_t i) const { return points[i]; }
};

constexpr double kDedupToleranceSq = 1e-12 * 1e-12;

PointCloud make_cloud(std::vector<Point> pts, int dim);
PointCloud make_cloud_2d(const std::vector<Vec2>& pts);

// Parallelism cap: TOPOKIT_THREADS when set, else hardware concurrency
// (minimum 1). Purely advisory; results never depend on it.
int thread_budget();

// ---------------------------------------------------------------------------
// Simplices
// ---------------------------------------------------------------------------

// 1 to 4 strictly increasing vertex indices; dim() = count - 1.
struct Simplex {
  std::array<Index, 4> v{-1, -1, -1, -1};
  int n = 0;

  Simplex() = default;
  Simplex(std::initializer_list<Index> verts);
  explicit Simplex(const std::vector<Index>& verts);

  int dim() const { return n - 1; }
  Index operator[](int i) const { return v[i]; }
  const Index* begin() const { return v.data(); }
  const Index* end() const { return v.data() + n; }
  bool contains(Index idx) const {
    for (int i = 0; i < n; ++i)
      if (v[i] == idx) return true;
    return false;
  }
  // Face obtained by dropping vertex position i.
  Simplex face_opposite(int i) const;

  bool operator==(const Simplex& o) const { return n == o.n && v == o.v; }
  bool operator<(const Simplex& o) const {
    if (n != o.n) return n < o.n;
    return v < o.v;
  }
  std::string str() const;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < s.n; ++i) {
      h ^= static_cast<std::uint64_t>(s.v[i]) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ static_cast<std::uint64_t>(s.n));
  }
};

}  // namespace topokit
