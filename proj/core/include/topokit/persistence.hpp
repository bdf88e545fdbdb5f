#pragma once

#include <limits>
#include <vector>

#include "topokit/geometry.hpp"
#include "topokit/types.hpp"

namespace topokit {

constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Filtered complexes
// ---------------------------------------------------------------------------

struct FilteredSimplex {
  Simplex s;
  double value = 0.0;
  // Alpha filtrations: index (into FilteredComplex::simplices) of the simplex
  // whose squared circumradius defines `value` — the gradient target. -1 for
  // lower-star simplices.
  int value_source = -1;
  // Lower-star filtrations: vertex whose function value defines `value`
  // (lowest index on ties). -1 for alpha simplices.
  Index argmax_vertex = -1;
};

struct FilteredComplex {
  std::vector<FilteredSimplex> simplices;
  // Processing permutation, sorted by (value, dimension, lexicographic
  // vertices); faces always precede cofaces.
  std::vector<int> order;
  // True when the complex was built on a dimension-reduced (flattened) copy of
  // a degenerate input cloud.
  bool reduced_dimension = false;
  // Ambient dimension actually used to build the complex.
  int effective_dim = 0;

  std::size_t size() const { return simplices.size(); }
  double max_value() const;
};

// Sorts, validates monotonicity (exact: every face value <= coface value) and
// returns the ready-to-reduce complex. Throws NonMonotoneFiltration.
FilteredComplex make_filtered_complex(std::vector<FilteredSimplex> simplices);

// Alpha filtration of a 2D/3D cloud: Delaunay complex with standard alpha
// values (squared circumradius for Gabriel simplices, min over cofaces
// otherwise, propagated top-down). Degenerate clouds are flattened into their
// affine hull first (coplanar -> 2D, collinear -> 1D path complex, single
// point -> vertex) and flagged via reduced_dimension.
FilteredComplex alpha_filtration(const PointCloud& cloud);

// Lower-star filtration: f(simplex) = max over vertex values, argmax vertex
// recorded (lowest index on ties). The complex must be closed under faces.
// Throws MissingVertexValue / InvalidComplex.
FilteredComplex lower_star_filtration(const std::vector<Simplex>& complex,
                                      const std::vector<double>& vertex_values);

// ---------------------------------------------------------------------------
// Persistence diagrams
// ---------------------------------------------------------------------------

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = kInfiniteDeath;
  Simplex birth_simplex;
  Simplex death_simplex;      // empty (n == 0) for infinite bars
  int birth_index = -1;       // positions in FilteredComplex::simplices
  int death_index = -1;
  Index birth_vertex = -1;    // lower-star only
  Index death_vertex = -1;

  bool infinite() const { return !(death < kInfiniteDeath); }
  double persistence() const { return death - birth; }
};

struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
  // Largest filtration value of the originating complex; default cap for
  // essential bars.
  double max_filtration = 0.0;

  std::size_t size() const { return pairs.size(); }
};

// Standard Z/2 boundary-matrix column reduction (pivot cache, no clearing).
// Emits every pair including zero-persistence ones; unpaired positive
// simplices become infinite bars. Throws NonMonotoneFiltration.
PersistenceDiagram compute_persistence(const FilteredComplex& fc);

// beta^i at scale alpha: count of dim-i pairs with birth <= alpha < death.
std::array<int, 3> betti_numbers(const PersistenceDiagram& diagram, double alpha);

// Copy with every infinite death replaced by `cap`.
PersistenceDiagram capped(const PersistenceDiagram& diagram, double cap);

// ---------------------------------------------------------------------------
// Truncated barcodes
// ---------------------------------------------------------------------------

struct Bar {
  double birth = 0.0;
  double death = 0.0;
  // Index of the pair in the source diagram; lets callers recover critical
  // simplices for gradients.
  int pair_index = -1;

  double length() const { return death - birth; }
};

struct TruncatedBarcode {
  std::array<std::vector<Bar>, 3> bars;  // per homology dimension
  std::array<int, 3> k{0, 0, 0};
};

// Top-k_i bars per dimension by persistence (ties: birth asc, death asc),
// infinite bars capped at `cap` before ranking. The overload without `cap`
// uses diagram.max_filtration.
TruncatedBarcode truncate_topk(const PersistenceDiagram& diagram,
                               const std::array<int, 3>& k, double cap);
TruncatedBarcode truncate_topk(const PersistenceDiagram& diagram,
                               const std::array<int, 3>& k);

// ---------------------------------------------------------------------------
// Rank oracle
// ---------------------------------------------------------------------------

// Reduction-free reference: recovers the pairing from ranks of lower-left
// boundary submatrices (pairing-uniqueness inclusion-exclusion). Slow and
// only for complexes of <= 200 simplices; throws ComplexTooLarge.
PersistenceDiagram betti_rank_oracle(const FilteredComplex& fc);

}  // namespace topokit
