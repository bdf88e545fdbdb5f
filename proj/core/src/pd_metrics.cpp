#include "topokit/pd_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <set>
#include <vector>

namespace topokit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kForbidden = 1e30;

void require_capped(const PersistenceDiagram& d, const char* who) {
  for (const PersistencePair& p : d.pairs)
    if (p.infinite())
      throw UncappedInfiniteBar(std::string(who) + ": infinite bar, cap the diagram first");
}

struct BarsByDim {
  std::array<std::vector<std::pair<double, double>>, 3> bars;  // (birth, death)
  std::array<std::vector<int>, 3> pair_index;
};

BarsByDim split_dims(const PersistenceDiagram& d) {
  BarsByDim out;
  for (int i = 0; i < static_cast<int>(d.pairs.size()); ++i) {
    const PersistencePair& p = d.pairs[i];
    if (p.dim < 0 || p.dim > 2) continue;
    out.bars[p.dim].emplace_back(p.birth, p.death);
    out.pair_index[p.dim].push_back(i);
  }
  return out;
}

double pair_cost_q(const std::pair<double, double>& a,
                   const std::pair<double, double>& b, double q) {
  return std::pow(std::abs(a.first - b.first), q) +
         std::pow(std::abs(a.second - b.second), q);
}

double diagonal_cost_q(const std::pair<double, double>& a, double q) {
  return 2.0 * std::pow((a.second - a.first) * 0.5, q);
}

double pair_cost_linf(const std::pair<double, double>& a,
                      const std::pair<double, double>& b) {
  return std::max(std::abs(a.first - b.first), std::abs(a.second - b.second));
}

double diagonal_cost_linf(const std::pair<double, double>& a) {
  return (a.second - a.first) * 0.5;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact assignment (augmenting paths with potentials, O(n^3))
// ---------------------------------------------------------------------------

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost,
                                  double* total) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) {
    if (total) *total = 0.0;
    return {};
  }
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) {
    if (p[j] == 0) continue;
    row_to_col[p[j] - 1] = j - 1;
    sum += cost[p[j] - 1][j - 1];
  }
  if (total) *total = sum;
  return row_to_col;
}

// ---------------------------------------------------------------------------
// q-Wasserstein
// ---------------------------------------------------------------------------

namespace {

double wasserstein_dim(const std::vector<std::pair<double, double>>& a,
                       const std::vector<std::pair<double, double>>& b, double q) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  if (m + n == 0) return 0.0;
  // Diagonal augmentation: n ghost targets for a's points, m ghost sources for
  // b's points, ghost-to-ghost free.
  const int N = m + n;
  std::vector<std::vector<double>> cost(N, std::vector<double>(N, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = pair_cost_q(a[i], b[j], q);
  for (int i = 0; i < m; ++i)
    for (int j = n; j < N; ++j) cost[i][j] = diagonal_cost_q(a[i], q);
  for (int i = m; i < N; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = diagonal_cost_q(b[j], q);
  double total = 0.0;
  solve_assignment(cost, &total);
  return std::pow(total, 1.0 / q);
}

}  // namespace

double wasserstein(const PersistenceDiagram& da, const PersistenceDiagram& db,
                   double q) {
  if (!(q >= 1.0)) throw Error("wasserstein: q must be >= 1");
  require_capped(da, "wasserstein");
  require_capped(db, "wasserstein");
  BarsByDim a = split_dims(da), b = split_dims(db);
  double sum = 0.0;
  for (int d = 0; d < 3; ++d) sum += wasserstein_dim(a.bars[d], b.bars[d], q);
  return sum;
}

// ---------------------------------------------------------------------------
// Bottleneck
// ---------------------------------------------------------------------------

namespace {

// Perfect-matching feasibility on the diagonal-augmented bipartite graph with
// edges of L-inf cost <= thr.
bool bottleneck_feasible(const std::vector<std::pair<double, double>>& a,
                         const std::vector<std::pair<double, double>>& b,
                         double thr) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  const int N = m + n;
  std::vector<std::vector<int>> adj(N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      bool ok;
      if (i < m && j < n) ok = pair_cost_linf(a[i], b[j]) <= thr;
      else if (i < m) ok = diagonal_cost_linf(a[i]) <= thr;
      else if (j < n) ok = diagonal_cost_linf(b[j]) <= thr;
      else ok = true;
      if (ok) adj[i].push_back(j);
    }
  }
  std::vector<int> match_col(N, -1);
  std::vector<char> seen;
  std::function<bool(int)> try_kuhn = [&](int i) -> bool {
    for (int j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = 1;
      if (match_col[j] < 0 || try_kuhn(match_col[j])) {
        match_col[j] = i;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < N; ++i) {
    seen.assign(N, 0);
    if (!try_kuhn(i)) return false;
  }
  return true;
}

double bottleneck_dim(const std::vector<std::pair<double, double>>& a,
                      const std::vector<std::pair<double, double>>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::set<double> cand{0.0};
  for (const auto& pa : a) {
    cand.insert(diagonal_cost_linf(pa));
    for (const auto& pb : b) cand.insert(pair_cost_linf(pa, pb));
  }
  for (const auto& pb : b) cand.insert(diagonal_cost_linf(pb));
  std::vector<double> cs(cand.begin(), cand.end());
  int lo = 0, hi = static_cast<int>(cs.size()) - 1;
  // The largest candidate (everything allowed) is always feasible.
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (bottleneck_feasible(a, b, cs[mid])) hi = mid;
    else lo = mid + 1;
  }
  return cs[lo];
}

}  // namespace

double bottleneck(const PersistenceDiagram& da, const PersistenceDiagram& db) {
  require_capped(da, "bottleneck");
  require_capped(db, "bottleneck");
  BarsByDim a = split_dims(da), b = split_dims(db);
  double worst = 0.0;
  for (int d = 0; d < 3; ++d)
    worst = std::max(worst, bottleneck_dim(a.bars[d], b.bars[d]));
  return worst;
}

// ---------------------------------------------------------------------------
// TopoDiff
// ---------------------------------------------------------------------------

namespace {

PersistenceDiagram alpha_diagram(const PointCloud& cloud) {
  return compute_persistence(alpha_filtration(cloud));
}

PersistenceDiagram restrict_dims01(const PersistenceDiagram& d) {
  PersistenceDiagram out;
  out.max_filtration = d.max_filtration;
  for (const PersistencePair& p : d.pairs)
    if (p.dim <= 1) out.pairs.push_back(p);
  return out;
}

}  // namespace

double topo_diff(const PointCloud& x, const PointCloud& x_hat) {
  PersistenceDiagram da, db;
  if (thread_budget() >= 2) {
    auto fa = std::async(std::launch::async, [&] { return alpha_diagram(x); });
    db = alpha_diagram(x_hat);
    da = fa.get();
  } else {
    da = alpha_diagram(x);
    db = alpha_diagram(x_hat);
  }
  // Shared cap: essential bars must stay comparable between the two clouds,
  // so both diagrams are capped at the larger of the two complex maxima.
  double cap = std::max(da.max_filtration, db.max_filtration);
  return wasserstein(restrict_dims01(capped(da, cap)),
                     restrict_dims01(capped(db, cap)), 2.0);
}

// ---------------------------------------------------------------------------
// Total persistence
// ---------------------------------------------------------------------------

double total_persistence(const PersistenceDiagram& d, double k) {
  require_capped(d, "total_persistence");
  double sum = 0.0;
  for (const PersistencePair& p : d.pairs)
    sum += std::pow(p.death - p.birth, k);
  return sum;
}

// ---------------------------------------------------------------------------
// Injective matching (L_topo)
// ---------------------------------------------------------------------------

Matching injective_matching_cost(const PersistenceDiagram& pred,
                                 const PersistenceDiagram& gt) {
  require_capped(pred, "injective_matching_cost");
  require_capped(gt, "injective_matching_cost");
  BarsByDim p = split_dims(pred), g = split_dims(gt);

  Matching out;
  for (int d = 0; d < 3; ++d) {
    // Off-diagonal ground-truth points only.
    std::vector<int> src;
    for (std::size_t i = 0; i < g.bars[d].size(); ++i)
      if (g.bars[d][i].second > g.bars[d][i].first) src.push_back(static_cast<int>(i));
    const int ns = static_cast<int>(src.size());
    const int nt = static_cast<int>(p.bars[d].size());
    if (ns == 0) continue;

    const bool padded = ns > nt;
    const int cols = nt + (padded ? ns : 0);
    const int N = std::max(ns, cols);
    std::vector<std::vector<double>> cost(N, std::vector<double>(N, 0.0));
    for (int i = 0; i < ns; ++i) {
      const auto& gp = g.bars[d][src[i]];
      for (int j = 0; j < nt; ++j) cost[i][j] = pair_cost_q(gp, p.bars[d][j], 2.0);
      if (padded) {
        // Slot j is the diagonal projection of gt point j; only its own
        // source may use it.
        for (int j = 0; j < ns; ++j)
          cost[i][nt + j] = (i == j) ? diagonal_cost_q(gp, 2.0) : kForbidden;
      }
    }
    std::vector<int> assign = solve_assignment(cost, nullptr);
    for (int i = 0; i < ns; ++i) {
      int j = assign[i];
      Matching::Edge e;
      e.source = DiagramPointRef::b(g.pair_index[d][src[i]]);
      if (j < nt) {
        e.target = DiagramPointRef::a(p.pair_index[d][j]);
        e.cost = cost[i][j];
      } else {
        e.target = DiagramPointRef::diagonal(g.pair_index[d][src[i]]);
        e.cost = diagonal_cost_q(g.bars[d][src[i]], 2.0);
      }
      out.pairs.push_back(e);
      out.cost += e.cost;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

double brute_force_dim(const std::vector<std::pair<double, double>>& a,
                       const std::vector<std::pair<double, double>>& b, double q) {
  const bool use_max = std::isinf(q);
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  double best = kInf;
  std::vector<char> used(n, 0);

  auto combine = [&](double acc, double extra) {
    return use_max ? std::max(acc, extra) : acc + extra;
  };
  std::function<void(int, double)> rec = [&](int i, double acc) {
    if (acc >= best) return;
    if (i == m) {
      double total = acc;
      for (int j = 0; j < n; ++j)
        if (!used[j])
          total = combine(total, use_max ? diagonal_cost_linf(b[j])
                                         : diagonal_cost_q(b[j], q));
      best = std::min(best, total);
      return;
    }
    rec(i + 1, combine(acc, use_max ? diagonal_cost_linf(a[i])
                                    : diagonal_cost_q(a[i], q)));
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      rec(i + 1, combine(acc, use_max ? pair_cost_linf(a[i], b[j])
                                      : pair_cost_q(a[i], b[j], q)));
      used[j] = 0;
    }
  };
  rec(0, use_max ? 0.0 : 0.0);
  if (m + n == 0) return 0.0;
  return use_max ? best : std::pow(best, 1.0 / q);
}

}  // namespace

double brute_force_diagram_distance(const PersistenceDiagram& da,
                                    const PersistenceDiagram& db, double q) {
  require_capped(da, "brute_force_diagram_distance");
  require_capped(db, "brute_force_diagram_distance");
  BarsByDim a = split_dims(da), b = split_dims(db);
  for (int d = 0; d < 3; ++d)
    if (a.bars[d].size() > 6 || b.bars[d].size() > 6)
      throw DiagramTooLarge("brute_force_diagram_distance limited to 6 points per dim");
  const bool use_max = std::isinf(q);
  double acc = 0.0;
  for (int d = 0; d < 3; ++d) {
    double v = brute_force_dim(a.bars[d], b.bars[d], q);
    acc = use_max ? std::max(acc, v) : acc + v;
  }
  return acc;
}

}  // namespace topokit
