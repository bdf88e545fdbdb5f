#pragma once

#include <vector>

#include "topokit/persistence.hpp"

namespace topokit {

// ---------------------------------------------------------------------------
// Matchings between diagrams
// ---------------------------------------------------------------------------

struct DiagramPointRef {
  enum class Kind { A, B, Diagonal } kind = Kind::Diagonal;
  int index = -1;  // pair index within its diagram; for Diagonal, the index of
                   // the point whose projection is used

  static DiagramPointRef a(int i) { return {Kind::A, i}; }
  static DiagramPointRef b(int i) { return {Kind::B, i}; }
  static DiagramPointRef diagonal(int i) { return {Kind::Diagonal, i}; }
  bool is_diagonal() const { return kind == Kind::Diagonal; }
};

struct Matching {
  struct Edge {
    DiagramPointRef source;
    DiagramPointRef target;
    double cost = 0.0;
  };
  std::vector<Edge> pairs;
  double cost = 0.0;
};

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

// q-Wasserstein distance with diagonal augmentation, computed per homology
// dimension with an exact cubic-time assignment solver and summed over
// dimensions. Per-pair cost |db|^q + |dd|^q; the per-dimension total is raised
// to 1/q. Diagrams must be capped (throws UncappedInfiniteBar).
double wasserstein(const PersistenceDiagram& da, const PersistenceDiagram& db,
                   double q);

// Bottleneck distance (q = infinity): per dimension, the smallest feasible
// max L-inf transport cost found by binary search over candidate costs with
// bipartite feasibility checks; combined across dimensions by max.
double bottleneck(const PersistenceDiagram& da, const PersistenceDiagram& db);

// Wasserstein (q=2) between the alpha-filtration diagrams of two clouds,
// summed over homology dimensions 0 and 1; each diagram capped at its own
// complex's maximum filtration value.
double topo_diff(const PointCloud& x, const PointCloud& x_hat);

// Sum over pairs of persistence^k. Requires a finite diagram.
double total_persistence(const PersistenceDiagram& d, double k);

// Minimal-cost injection from the off-diagonal ground-truth points into the
// prediction diagram (per dimension), cost = sum of squared birth and death
// differences. When a dimension of `pred` has fewer points than gt's
// off-diagonal multiset, the deficit is covered by matching surplus gt points
// to their own diagonal projections (targets flagged Diagonal).
Matching injective_matching_cost(const PersistenceDiagram& pred,
                                 const PersistenceDiagram& gt);

// Exhaustive minimum over all diagonal-augmented bijections; test oracle for
// wasserstein/bottleneck (pass q = infinity for bottleneck). Throws
// DiagramTooLarge above 6 points per diagram per dimension.
double brute_force_diagram_distance(const PersistenceDiagram& da,
                                    const PersistenceDiagram& db, double q);

// Exact min-cost assignment of an n x n matrix (augmenting-path Hungarian,
// O(n^3)); returns column assigned to each row. Exposed for tests.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost,
                                  double* total = nullptr);

}  // namespace topokit
