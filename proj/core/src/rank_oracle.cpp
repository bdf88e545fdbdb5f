#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "persistence_internal.hpp"
#include "topokit/persistence.hpp"

// Reduction-free persistence reference. The pairing is recovered purely from
// ranks of boundary submatrices: with r(p, q) = rank of the lower-left block
// of the total Z/2 boundary matrix (rows p..n, columns 1..q), column q kills
// the class created at row p exactly when
//   r(p,q) - r(p+1,q) - r(p,q-1) + r(p+1,q-1) = 1
// (pairing-uniqueness inclusion-exclusion), and a column is negative exactly
// when it raises the full column rank. No column operations are reused from
// compute_persistence, which is the point of the oracle.

namespace topokit {

namespace {

// Dense Z/2 matrix held column-wise as 64-bit row masks.
struct BitColumns {
  int rows = 0;
  int words = 0;
  std::vector<std::uint64_t> data;  // column-major

  BitColumns(int r, int c) : rows(r), words((r + 63) / 64), data(static_cast<std::size_t>(words) * c, 0) {}

  std::uint64_t* col(int c) { return data.data() + static_cast<std::size_t>(c) * words; }
  const std::uint64_t* col(int c) const {
    return data.data() + static_cast<std::size_t>(c) * words;
  }
  void set(int r, int c) { col(c)[r >> 6] |= 1ull << (r & 63); }
};

int top_bit(const std::uint64_t* w, int words) {
  for (int i = words - 1; i >= 0; --i)
    if (w[i]) return i * 64 + 63 - __builtin_clzll(w[i]);
  return -1;
}

}  // namespace

PersistenceDiagram betti_rank_oracle(const FilteredComplex& fc) {
  const int n = static_cast<int>(fc.size());
  if (n > 200) throw ComplexTooLarge("betti_rank_oracle limited to 200 simplices");
  if (n == 0) return PersistenceDiagram{};

  std::unordered_map<Simplex, int, SimplexHash> rank_of;
  for (int r = 0; r < n; ++r) rank_of.emplace(fc.simplices[fc.order[r]].s, r);

  BitColumns boundary(n, n);
  for (int j = 0; j < n; ++j) {
    const Simplex& s = fc.simplices[fc.order[j]].s;
    if (s.n < 2) continue;
    for (int i = 0; i < s.n; ++i) boundary.set(rank_of.at(s.face_opposite(i)), j);
  }

  // R[p][q] = rank of rows p..n-1, columns 0..q-1 (0-indexed p, 1-indexed q).
  std::vector<std::vector<int>> R(n + 1, std::vector<int>(n + 1, 0));
  const int words = boundary.words;
  std::vector<std::uint64_t> work(words), pivots;
  std::vector<int> pivot_slot(n, -1);
  for (int p = n; p >= 0; --p) {
    pivots.clear();
    std::fill(pivot_slot.begin(), pivot_slot.end(), -1);
    int rank = 0;
    // Mask keeping rows >= p.
    std::vector<std::uint64_t> mask(words, ~0ull);
    for (int r = 0; r < p; ++r) mask[r >> 6] &= ~(1ull << (r & 63));
    for (int q = 1; q <= n; ++q) {
      const std::uint64_t* src = boundary.col(q - 1);
      for (int w = 0; w < words; ++w) work[w] = src[w] & mask[w];
      while (true) {
        int t = top_bit(work.data(), words);
        if (t < 0) break;
        if (pivot_slot[t] >= 0) {
          const std::uint64_t* pv =
              pivots.data() + static_cast<std::size_t>(pivot_slot[t]) * words;
          for (int w = 0; w < words; ++w) work[w] ^= pv[w];
        } else {
          pivot_slot[t] = rank;
          pivots.insert(pivots.end(), work.begin(), work.end());
          ++rank;
          break;
        }
      }
      R[p][q] = rank;
    }
  }

  std::vector<std::pair<int, int>> pairs;
  std::vector<char> is_negative(n, 0), claimed(n, 0);
  for (int q = 1; q <= n; ++q) {
    if (R[0][q] == R[0][q - 1]) continue;  // positive column
    is_negative[q - 1] = 1;
    int found = -1;
    for (int p = 0; p < q - 1 && found < 0; ++p) {
      int multiplicity = R[p][q] - R[p + 1][q] - R[p][q - 1] + R[p + 1][q - 1];
      if (multiplicity == 1) found = p;
    }
    if (found < 0) throw Error("rank oracle: negative column without a pivot row");
    pairs.emplace_back(found, q - 1);
    claimed[found] = 1;
  }

  std::vector<int> essential;
  for (int i = 0; i < n; ++i)
    if (!is_negative[i] && !claimed[i]) essential.push_back(i);

  return detail_persistence::assemble_diagram(fc, pairs, essential);
}

}  // namespace topokit
