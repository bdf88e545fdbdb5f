#pragma once

#include <cstdint>
#include <vector>

#include "topokit/types.hpp"

namespace topokit::testing {

// Small deterministic generator so fixtures are identical across platforms.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline std::vector<Point> random_points(Rng& rng, int n, int dim) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i)
    pts.push_back({rng.uniform(), rng.uniform(), dim == 3 ? rng.uniform() : 0.0});
  return pts;
}

// Points on the unit sphere via normalized gaussians (Box-Muller on the
// deterministic generator).
inline std::vector<Point> sphere_points(Rng& rng, int n) {
  std::vector<Point> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n) {
    double u1 = rng.uniform(), u2 = rng.uniform();
    double u3 = rng.uniform(), u4 = rng.uniform();
    if (u1 <= 0.0 || u3 <= 0.0) continue;
    double g1 = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    double g2 = std::sqrt(-2.0 * std::log(u1)) * std::sin(6.283185307179586 * u2);
    double g3 = std::sqrt(-2.0 * std::log(u3)) * std::cos(6.283185307179586 * u4);
    Vec3 v{g1, g2, g3};
    double norm = v.norm();
    if (norm < 1e-9) continue;
    pts.push_back(v / norm);
  }
  return pts;
}

}  // namespace topokit::testing
