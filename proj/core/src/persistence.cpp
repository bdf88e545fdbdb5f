#include "topokit/persistence.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace topokit {

double FilteredComplex::max_value() const {
  double m = 0.0;
  for (const FilteredSimplex& fs : simplices) m = std::max(m, fs.value);
  return m;
}

FilteredComplex make_filtered_complex(std::vector<FilteredSimplex> simplices) {
  FilteredComplex fc;
  fc.simplices = std::move(simplices);
  fc.order.resize(fc.simplices.size());
  std::iota(fc.order.begin(), fc.order.end(), 0);
  std::sort(fc.order.begin(), fc.order.end(), [&](int a, int b) {
    const FilteredSimplex& sa = fc.simplices[a];
    const FilteredSimplex& sb = fc.simplices[b];
    if (sa.value != sb.value) return sa.value < sb.value;
    return sa.s < sb.s;  // dimension first, then lexicographic
  });

  // Exact monotonicity: every codim-1 face present with value <= coface's.
  std::unordered_map<Simplex, int, SimplexHash> index;
  index.reserve(fc.simplices.size() * 2);
  for (int i = 0; i < static_cast<int>(fc.simplices.size()); ++i) {
    auto [it, fresh] = index.emplace(fc.simplices[i].s, i);
    if (!fresh) throw InvalidComplex("duplicate simplex in filtered complex");
  }
  for (const FilteredSimplex& fs : fc.simplices) {
    if (fs.s.n < 2) continue;
    for (int i = 0; i < fs.s.n; ++i) {
      auto it = index.find(fs.s.face_opposite(i));
      if (it == index.end())
        throw InvalidComplex("complex not closed under faces: missing face of " +
                             fs.s.str());
      if (fc.simplices[it->second].value > fs.value)
        throw NonMonotoneFiltration("face " + fc.simplices[it->second].s.str() +
                                    " enters after coface " + fs.s.str());
    }
  }
  return fc;
}

// ---------------------------------------------------------------------------
// Lower-star filtration
// ---------------------------------------------------------------------------

FilteredComplex lower_star_filtration(const std::vector<Simplex>& complex,
                                      const std::vector<double>& vertex_values) {
  std::vector<FilteredSimplex> out;
  out.reserve(complex.size());
  for (const Simplex& s : complex) {
    FilteredSimplex fs;
    fs.s = s;
    fs.argmax_vertex = -1;
    double best = -kInfiniteDeath;
    for (Index v : s) {
      if (v < 0 || v >= static_cast<Index>(vertex_values.size()))
        throw MissingVertexValue("no value for vertex " + std::to_string(v));
      if (vertex_values[v] > best) {  // strict: ties keep the lowest index
        best = vertex_values[v];
        fs.argmax_vertex = v;
      }
    }
    fs.value = best;
    out.push_back(fs);
  }
  return make_filtered_complex(std::move(out));
}

// ---------------------------------------------------------------------------
// Alpha filtration
// ---------------------------------------------------------------------------

namespace {

// All faces of the maximal simplices, grouped and deduplicated.
std::vector<Simplex> close_under_faces(const std::vector<Simplex>& tops,
                                       int vertex_count) {
  std::unordered_set<Simplex, SimplexHash> seen;
  for (Index v = 0; v < vertex_count; ++v) seen.insert(Simplex{v});
  for (const Simplex& top : tops) {
    const int m = top.n;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<Index> verts;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) verts.push_back(top[i]);
      seen.insert(Simplex(verts));
    }
  }
  std::vector<Simplex> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Standard alpha values on a nondegenerate cloud of dimension work.dim:
// Gabriel simplices take their squared circumradius, attached simplices take
// the min over cofaces, propagated from the top dimension down; value_source
// tracks the simplex whose circumradius defines each value.
std::vector<FilteredSimplex> alpha_values(const PointCloud& work) {
  std::vector<Simplex> tops = delaunay(work);
  std::vector<Simplex> all = close_under_faces(tops, static_cast<int>(work.size()));

  std::unordered_map<Simplex, int, SimplexHash> index;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) index.emplace(all[i], i);

  std::vector<std::vector<int>> cofaces(all.size());
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    if (all[i].n < 2) continue;
    for (int f = 0; f < all[i].n; ++f)
      cofaces[index.at(all[i].face_opposite(f))].push_back(i);
  }

  std::vector<FilteredSimplex> fs(all.size());
  std::vector<char> assigned(all.size(), 0);
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    fs[i].s = all[i];
    if (all[i].n == 1) {
      fs[i].value = 0.0;
      fs[i].value_source = i;
      assigned[i] = 1;
    }
  }

  const int top_dim = work.dim;
  for (int d = top_dim; d >= 1; --d) {
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
      if (all[i].dim() != d || assigned[i]) continue;
      Circumsphere cs = circumsphere(all[i], work);
      bool gabriel = true;
      if (d < top_dim) {
        for (std::size_t p = 0; p < work.size(); ++p) {
          if (all[i].contains(static_cast<Index>(p))) continue;
          // Strictly inside with slack so on-sphere points stay Gabriel.
          if (dist_sq(work[p], cs.center) <
              cs.radius_sq - 1e-12 * (1.0 + cs.radius_sq)) {
            gabriel = false;
            break;
          }
        }
      }
      if (d == top_dim || gabriel) {
        fs[i].value = cs.radius_sq;
        fs[i].value_source = i;
      } else {
        int best = -1;
        for (int cf : cofaces[i])
          if (best < 0 || fs[cf].value < fs[best].value) best = cf;
        fs[i].value = fs[best].value;
        fs[i].value_source = fs[best].value_source;
      }
      assigned[i] = 1;
    }
  }

  // Round-off repair: raise any coface below one of its faces by copying the
  // face's value, keeping value == circumradius_sq(value_source) exact.
  for (int d = 1; d <= top_dim; ++d) {
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
      if (all[i].dim() != d) continue;
      for (int f = 0; f < all[i].n; ++f) {
        int fi = index.at(all[i].face_opposite(f));
        if (fs[fi].value > fs[i].value) {
          fs[i].value = fs[fi].value;
          fs[i].value_source = fs[fi].value_source;
        }
      }
    }
  }
  return fs;
}

// 1D alpha complex: path along the spanning axis, edges between consecutive
// points at squared half-length.
std::vector<FilteredSimplex> alpha_values_collinear(const PointCloud& cloud,
                                                    const detail::AffineBasis& basis) {
  std::vector<std::pair<double, Index>> along;
  along.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    along.emplace_back((cloud[i] - basis.origin).dot(basis.axes[0]),
                       static_cast<Index>(i));
  std::sort(along.begin(), along.end());

  std::vector<FilteredSimplex> fs;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    FilteredSimplex v;
    v.s = Simplex{static_cast<Index>(i)};
    v.value = 0.0;
    fs.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < along.size(); ++i) {
    FilteredSimplex e;
    e.s = Simplex{along[i].second, along[i + 1].second};
    e.value = dist_sq(cloud[along[i].second], cloud[along[i + 1].second]) * 0.25;
    fs.push_back(e);
  }
  for (int i = 0; i < static_cast<int>(fs.size()); ++i) fs[i].value_source = i;
  return fs;
}

}  // namespace

FilteredComplex alpha_filtration(const PointCloud& cloud) {
  if (cloud.size() == 0) throw DegenerateInput("alpha_filtration: empty cloud");
  detail::AffineBasis basis = detail::affine_basis(cloud);
  int rank = std::min(basis.rank, cloud.dim);

  FilteredComplex fc;
  if (rank == 0) {
    std::vector<FilteredSimplex> fs(1);
    fs[0].s = Simplex{0};
    fs[0].value = 0.0;
    fs[0].value_source = 0;
    fc = make_filtered_complex(std::move(fs));
    fc.effective_dim = 0;
    fc.reduced_dimension = cloud.size() > 1 || cloud.dim > 0;
    return fc;
  }
  if (rank == 1) {
    fc = make_filtered_complex(alpha_values_collinear(cloud, basis));
    fc.effective_dim = 1;
    fc.reduced_dimension = true;
    return fc;
  }
  if (rank == 2 && cloud.dim == 3) {
    // Flatten into the spanning plane; alpha values are computed from the
    // projected coordinates (isometric for genuinely coplanar input).
    std::vector<Point> flat(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      Vec3 d = cloud[i] - basis.origin;
      flat[i] = {d.dot(basis.axes[0]), d.dot(basis.axes[1]), 0.0};
    }
    PointCloud work{std::move(flat), 2};
    fc = make_filtered_complex(alpha_values(work));
    fc.effective_dim = 2;
    fc.reduced_dimension = true;
    return fc;
  }
  fc = make_filtered_complex(alpha_values(cloud));
  fc.effective_dim = cloud.dim;
  fc.reduced_dimension = false;
  return fc;
}

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

namespace detail_persistence {

// Shared by the reduction and the rank oracle so critical-simplex attribution
// is identical: pairs/essentials arrive in processing-rank space.
PersistenceDiagram assemble_diagram(const FilteredComplex& fc,
                                    const std::vector<std::pair<int, int>>& rank_pairs,
                                    const std::vector<int>& essential_ranks) {
  PersistenceDiagram dgm;
  dgm.max_filtration = fc.max_value();
  for (auto [bi, di] : rank_pairs) {
    const FilteredSimplex& b = fc.simplices[fc.order[bi]];
    const FilteredSimplex& d = fc.simplices[fc.order[di]];
    PersistencePair p;
    p.dim = b.s.dim();
    p.birth = b.value;
    p.death = d.value;
    p.birth_simplex = b.s;
    p.death_simplex = d.s;
    p.birth_index = fc.order[bi];
    p.death_index = fc.order[di];
    p.birth_vertex = b.argmax_vertex;
    p.death_vertex = d.argmax_vertex;
    dgm.pairs.push_back(p);
  }
  for (int bi : essential_ranks) {
    const FilteredSimplex& b = fc.simplices[fc.order[bi]];
    PersistencePair p;
    p.dim = b.s.dim();
    p.birth = b.value;
    p.death = kInfiniteDeath;
    p.birth_simplex = b.s;
    p.birth_index = fc.order[bi];
    p.birth_vertex = b.argmax_vertex;
    dgm.pairs.push_back(p);
  }
  std::sort(dgm.pairs.begin(), dgm.pairs.end(),
            [](const PersistencePair& x, const PersistencePair& y) {
              if (x.dim != y.dim) return x.dim < y.dim;
              if (x.birth != y.birth) return x.birth < y.birth;
              if (x.death != y.death) return x.death < y.death;
              return x.birth_simplex < y.birth_simplex;
            });
  return dgm;
}

}  // namespace detail_persistence

PersistenceDiagram compute_persistence(const FilteredComplex& fc) {
  const int n = static_cast<int>(fc.size());
  // Re-validate ordering: faces must precede cofaces.
  {
    std::unordered_map<Simplex, int, SimplexHash> rank_of;
    for (int r = 0; r < n; ++r) rank_of.emplace(fc.simplices[fc.order[r]].s, r);
    for (int r = 0; r < n; ++r) {
      const Simplex& s = fc.simplices[fc.order[r]].s;
      if (s.n < 2) continue;
      for (int i = 0; i < s.n; ++i) {
        auto it = rank_of.find(s.face_opposite(i));
        if (it == rank_of.end() || it->second > r)
          throw NonMonotoneFiltration("processing order violates face precedence");
      }
    }
  }

  std::unordered_map<Simplex, int, SimplexHash> rank_of;
  for (int r = 0; r < n; ++r) rank_of.emplace(fc.simplices[fc.order[r]].s, r);

  std::vector<std::vector<int>> stored(n);
  std::vector<int> pivot_owner(n, -1);
  std::vector<char> positive(n, 0);
  std::vector<std::pair<int, int>> rank_pairs;

  std::vector<int> col, tmp;
  for (int j = 0; j < n; ++j) {
    const Simplex& s = fc.simplices[fc.order[j]].s;
    col.clear();
    for (int i = 0; i < s.n && s.n >= 2; ++i)
      col.push_back(rank_of.at(s.face_opposite(i)));
    std::sort(col.begin(), col.end());

    while (!col.empty()) {
      int piv = col.back();
      int owner = pivot_owner[piv];
      if (owner < 0) break;
      // Z/2 column addition.
      tmp.clear();
      std::set_symmetric_difference(col.begin(), col.end(), stored[owner].begin(),
                                    stored[owner].end(), std::back_inserter(tmp));
      col.swap(tmp);
    }
    if (col.empty()) {
      positive[j] = 1;
    } else {
      int piv = col.back();
      pivot_owner[piv] = j;
      rank_pairs.emplace_back(piv, j);
      stored[j] = col;
    }
  }

  std::vector<int> essential;
  for (int i = 0; i < n; ++i)
    if (positive[i] && pivot_owner[i] < 0) essential.push_back(i);

  return detail_persistence::assemble_diagram(fc, rank_pairs, essential);
}

// ---------------------------------------------------------------------------
// Diagram utilities
// ---------------------------------------------------------------------------

std::array<int, 3> betti_numbers(const PersistenceDiagram& diagram, double alpha) {
  std::array<int, 3> betti{0, 0, 0};
  for (const PersistencePair& p : diagram.pairs) {
    if (p.dim > 2) continue;
    if (p.birth <= alpha && alpha < p.death) ++betti[p.dim];
  }
  return betti;
}

PersistenceDiagram capped(const PersistenceDiagram& diagram, double cap) {
  PersistenceDiagram out = diagram;
  for (PersistencePair& p : out.pairs)
    if (p.infinite()) p.death = std::max(cap, p.birth);
  return out;
}

TruncatedBarcode truncate_topk(const PersistenceDiagram& diagram,
                               const std::array<int, 3>& k, double cap) {
  TruncatedBarcode tb;
  tb.k = k;
  for (int d = 0; d < 3; ++d) {
    if (k[d] <= 0) continue;
    std::vector<Bar> bars;
    for (int i = 0; i < static_cast<int>(diagram.pairs.size()); ++i) {
      const PersistencePair& p = diagram.pairs[i];
      if (p.dim != d) continue;
      Bar b;
      b.birth = p.birth;
      b.death = p.infinite() ? std::max(cap, p.birth) : p.death;
      b.pair_index = i;
      bars.push_back(b);
    }
    std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
      double la = a.length(), lb = b.length();
      if (la != lb) return la > lb;
      if (a.birth != b.birth) return a.birth < b.birth;
      return a.death < b.death;
    });
    if (static_cast<int>(bars.size()) > k[d]) bars.resize(k[d]);
    tb.bars[d] = std::move(bars);
  }
  return tb;
}

TruncatedBarcode truncate_topk(const PersistenceDiagram& diagram,
                               const std::array<int, 3>& k) {
  return truncate_topk(diagram, k, diagram.max_filtration);
}

}  // namespace topokit
