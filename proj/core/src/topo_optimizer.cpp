#include "topokit/topo_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "topokit/io.hpp"

namespace topokit {

ToyProblem make_toy_problem(std::vector<Simplex> simplices,
                            std::vector<double> target_values,
                            std::vector<double> initial_values,
                            double supv_weight) {
  const int n = static_cast<int>(target_values.size());
  if (n == 0) throw InvalidComplex("toy problem needs at least one vertex");
  if (initial_values.size() != target_values.size())
    throw InvalidComplex("initial/target value counts differ");
  for (double v : target_values)
    if (!(v >= 0.0 && v <= 1.0))
      throw Error("target values must lie in [0,1]");
  for (double v : initial_values)
    if (!(v >= 0.0 && v <= 1.0))
      throw Error("initial values must lie in [0,1]");

  // Close under faces; vertices are always present.
  std::unordered_set<Simplex, SimplexHash> closed;
  for (Index v = 0; v < n; ++v) closed.insert(Simplex{v});
  for (const Simplex& s : simplices) {
    for (Index v : s)
      if (v < 0 || v >= n) throw InvalidComplex("simplex vertex out of range");
    const int m = s.n;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<Index> verts;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) verts.push_back(s[i]);
      closed.insert(Simplex(verts));
    }
  }
  std::vector<Simplex> complex(closed.begin(), closed.end());
  std::sort(complex.begin(), complex.end());

  ToyProblem p;
  p.complex = std::move(complex);
  p.target_values = std::move(target_values);
  p.initial_values = std::move(initial_values);
  p.supv_weight = supv_weight;
  return p;
}

namespace {

PersistenceDiagram target_diagram(const ToyProblem& problem) {
  return capped(compute_persistence(
                    lower_star_filtration(problem.complex, problem.target_values)),
                kToyDomainCap);
}

int off_diagonal_count(const PersistenceDiagram& d) {
  int b = 0;
  for (const PersistencePair& p : d.pairs)
    if (p.dim <= 2 && p.death > p.birth) ++b;
  return b;
}

// One matched endpoint of the frozen topology term: cost (value - target)^2
// where value is W[vertex], or the constant `fixed` for capped essentials and
// diagonal stand-ins.
struct FrozenTerm {
  double target = 0.0;
  int vertex = -1;
  double fixed = 0.0;
};

struct FrozenConfig {
  std::vector<FrozenTerm> terms;
  int matched_pairs = 0;
  double topo_at_build = 0.0;  // matching cost at the W it was built from
};

FrozenConfig build_config(const ToyProblem& problem, const PersistenceDiagram& gt,
                          const std::vector<double>& w) {
  PersistenceDiagram raw =
      compute_persistence(lower_star_filtration(problem.complex, w));
  PersistenceDiagram pred = capped(raw, kToyDomainCap);
  Matching match = injective_matching_cost(pred, gt);

  FrozenConfig cfg;
  cfg.topo_at_build = match.cost;
  for (const Matching::Edge& e : match.pairs) {
    const PersistencePair& gp = gt.pairs[e.source.index];
    if (e.target.is_diagonal()) {
      double mid = (gp.birth + gp.death) * 0.5;
      cfg.terms.push_back({gp.birth, -1, mid});
      cfg.terms.push_back({gp.death, -1, mid});
      continue;
    }
    ++cfg.matched_pairs;
    const PersistencePair& pp = pred.pairs[e.target.index];
    const PersistencePair& pp_raw = raw.pairs[e.target.index];
    cfg.terms.push_back({gp.birth, pp.birth_vertex, 0.0});
    if (pp_raw.infinite())  // capped death is the constant domain bound
      cfg.terms.push_back({gp.death, -1, kToyDomainCap});
    else
      cfg.terms.push_back({gp.death, pp.death_vertex, 0.0});
  }
  return cfg;
}

double supv_loss(const ToyProblem& problem, const std::vector<double>& w) {
  double s = 0.0;
  for (int v = 0; v < problem.vertex_count(); ++v) {
    double d = w[v] - problem.target_values[v];
    s += d * d;
  }
  return s * problem.supv_weight;
}

double frozen_topo(const FrozenConfig& cfg, const std::vector<double>& w) {
  double s = 0.0;
  for (const FrozenTerm& t : cfg.terms) {
    double value = t.vertex >= 0 ? w[t.vertex] : t.fixed;
    double d = value - t.target;
    s += d * d;
  }
  return s;
}

std::vector<double> frozen_gradient(const ToyProblem& problem,
                                    const FrozenConfig& cfg, double lambda,
                                    const std::vector<double>& w) {
  std::vector<double> g(w.size(), 0.0);
  for (int v = 0; v < problem.vertex_count(); ++v)
    g[v] = 2.0 * problem.supv_weight * (w[v] - problem.target_values[v]);
  for (const FrozenTerm& t : cfg.terms)
    if (t.vertex >= 0) g[t.vertex] += 2.0 * lambda * (w[t.vertex] - t.target);
  return g;
}

}  // namespace

TotalLoss total_loss(const ToyProblem& problem, const std::vector<double>& w,
                     double lambda_topo) {
  PersistenceDiagram gt = target_diagram(problem);
  PersistenceDiagram pred = capped(
      compute_persistence(lower_star_filtration(problem.complex, w)), kToyDomainCap);
  TotalLoss out;
  out.matching = injective_matching_cost(pred, gt);
  out.supv = supv_loss(problem, w);
  out.topo = out.matching.cost;
  out.total = out.supv + lambda_topo * out.topo;
  return out;
}

std::vector<double> total_loss_gradient(const ToyProblem& problem,
                                        const std::vector<double>& w,
                                        double lambda_topo) {
  PersistenceDiagram gt = target_diagram(problem);
  FrozenConfig config = build_config(problem, gt, w);
  return frozen_gradient(problem, config, lambda_topo, w);
}

TheoremConstants estimate_constants(const ToyProblem& problem, double lambda_topo) {
  const double n = static_cast<double>(problem.vertex_count());
  TheoremConstants c;
  c.l0 = problem.supv_weight * n;
  c.l1 = 2.0 * problem.supv_weight * std::sqrt(n);
  c.l2 = 2.0 * problem.supv_weight;
  c.lambda_topo = lambda_topo;
  c.bar_count = off_diagonal_count(target_diagram(problem));
  const double lb = lambda_topo * c.bar_count;
  c.c0 = c.l0 + lb;
  c.c1 = c.l1 + 2.0 * lb;
  c.c2 = c.l2 + 5.0 * lb;
  return c;
}

double step_size_bound(const TheoremConstants& c, double epsilon) {
  const double lb = c.lambda_topo * c.bar_count;
  double first = 1.0 / (2.0 * c.l2 + 10.0 * lb);
  if (lb <= 0.0) return first;
  double second = epsilon / (4096.0 * lb * lb);
  return std::min(first, second);
}

OptimizeResult optimize(const ToyProblem& problem, const OptimizerConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw Error("optimize: epsilon must be positive");
  if (cfg.persloss_period < 1) throw Error("optimize: period must be >= 1");

  OptimizeResult result;
  result.constants = estimate_constants(problem, cfg.lambda_topo);
  result.eta = cfg.eta ? *cfg.eta : step_size_bound(result.constants, cfg.epsilon);
  if (!(result.eta > 0.0)) throw Error("optimize: step size must be positive");

  PersistenceDiagram gt = target_diagram(problem);
  std::vector<double> w = problem.initial_values;
  for (double& v : w) v = std::clamp(v, 0.0, 1.0);

  FrozenConfig config = build_config(problem, gt, w);
  result.stop_reason = StopReason::MaxIters;

  for (int t = 0; t < cfg.max_iters; ++t) {
    double g_t_wt = supv_loss(problem, w) + cfg.lambda_topo * frozen_topo(config, w);
    if (!std::isfinite(g_t_wt)) {
      result.stop_reason = StopReason::NonFiniteLoss;
      break;
    }
    std::vector<double> grad = frozen_gradient(problem, config, cfg.lambda_topo, w);
    std::vector<double> w_next(w.size());
    double step_sq = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w_next[i] = std::clamp(w[i] - result.eta * grad[i], 0.0, 1.0);
      step_sq += (w_next[i] - w[i]) * (w_next[i] - w[i]);
    }

    double topo_held = frozen_topo(config, w_next);
    double supv_next = supv_loss(problem, w_next);
    double g_t_wnext = supv_next + cfg.lambda_topo * topo_held;

    FrozenConfig next_config = config;
    if ((t + 1) % cfg.persloss_period == 0)
      next_config = build_config(problem, gt, w_next);
    double topo_refreshed = frozen_topo(next_config, w_next);
    double g_next = supv_next + cfg.lambda_topo * topo_refreshed;

    TraceRow row;
    row.t = t;
    row.g_t_wt = g_t_wt;
    row.g_t_wnext = g_t_wnext;
    row.g_next_wnext = g_next;
    row.step_norm = std::sqrt(step_sq);
    row.supv = supv_next;
    row.topo_held = topo_held;
    row.topo_refreshed = topo_refreshed;
    row.matched_pairs = config.matched_pairs;
    result.trace.push_back(row);

    w = std::move(w_next);
    config = std::move(next_config);

    if (!std::isfinite(g_t_wnext) || !std::isfinite(g_next)) {
      result.stop_reason = StopReason::NonFiniteLoss;
      break;
    }
    if (g_t_wt - g_t_wnext < cfg.epsilon) {
      result.stop_reason = StopReason::Converged;
      break;
    }
  }
  result.w_final = w;
  return result;
}

std::vector<bool> verify_lemma2(const std::vector<TraceRow>& trace, double eta) {
  std::vector<bool> ok;
  ok.reserve(trace.size());
  for (const TraceRow& r : trace) {
    double decrease = r.g_t_wt - r.g_t_wnext;
    double rhs = 2.0 * std::sqrt(eta * std::max(decrease, 0.0));
    ok.push_back(decrease >= 0.0 ? r.step_norm <= rhs + 1e-9
                                 : r.step_norm <= 1e-9);
  }
  return ok;
}

std::vector<bool> verify_lemma3(const std::vector<TraceRow>& trace,
                                const TheoremConstants& constants, double eta) {
  std::vector<bool> ok;
  ok.reserve(trace.size());
  for (const TraceRow& r : trace) {
    double decrease = std::max(r.g_t_wt - r.g_t_wnext, 0.0);
    double lhs = r.topo_held - r.topo_refreshed;
    double rhs = 16.0 * constants.bar_count * std::sqrt(eta * decrease);
    ok.push_back(lhs <= rhs + 1e-9);
  }
  return ok;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "t,G_t(W_t),G_t(W_t+1),G_t+1(W_t+1),step_norm,L_supv,L_topo_held,"
        "L_topo_refreshed\n";
  for (const TraceRow& r : trace) {
    os << r.t << ',' << fmt_double(r.g_t_wt) << ',' << fmt_double(r.g_t_wnext)
       << ',' << fmt_double(r.g_next_wnext) << ',' << fmt_double(r.step_norm)
       << ',' << fmt_double(r.supv) << ',' << fmt_double(r.topo_held) << ','
       << fmt_double(r.topo_refreshed) << '\n';
  }
  return os.str();
}

}  // namespace topokit
