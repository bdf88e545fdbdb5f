#pragma once

#include <vector>

#include "topokit/geometry.hpp"
#include "topokit/types.hpp"

namespace topokit {

struct LpviConfig {
  int k = 16;               // neighbor count for the 3D branch
  int k_prime = 8;          // neighbor count for the 2D branch
  double tau = 0.5;         // TopoDiff threshold on the scale-normalized
                            // neighborhood (squared-distance Wasserstein units)
  double locality_factor = 2.0;  // Voronoi vertex distance cap
};

enum class LpviBranch { Accepted3d, Fallback2d, Skipped };

struct LpviNeighborhood {
  Index center = -1;
  LpviBranch branch = LpviBranch::Skipped;
  // Scale-normalized TopoDiff of the 3D candidate set; NaN when the 3D branch
  // was never evaluated (degenerate neighborhood).
  double topo_diff_value = 0.0;
  bool topo_diff_evaluated = false;
  // Slice of LpviResult added points contributed by this neighborhood.
  int added_begin = 0;
  int added_count = 0;
};

struct LpviReport {
  int accepted_3d = 0;
  int fallback_2d = 0;
  int skipped = 0;
  int points_added = 0;
  std::vector<LpviNeighborhood> neighborhoods;

  int processed() const { return accepted_3d + fallback_2d + skipped; }
};

struct LpviResult {
  PointCloud interpolated;  // originals first (unchanged), added points after
  int original_count = 0;
  LpviReport report;
};

// Algorithm: sweep unvisited points in index order; per center, try the
// neighborhood-local 3D Voronoi candidates guarded by the TopoDiff test, else
// fall back to PCA-plane 2D Voronoi interpolation lifted back to 3D.
// Accepted candidates are deduplicated (1e-9) against originals and earlier
// additions before the TopoDiff test so the report re-verifies exactly.
// Throws CloudTooSmall when the cloud has fewer than k+1 points.
LpviResult lpvi(const PointCloud& cloud, const LpviConfig& cfg);

}  // namespace topokit
