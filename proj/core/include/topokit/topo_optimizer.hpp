#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topokit/pd_metrics.hpp"
#include "topokit/persistence.hpp"

namespace topokit {

// Vertex filter values live in [0,1]; essential bars of both target and
// prediction diagrams are capped here, which also keeps the filter 1-bounded.
constexpr double kToyDomainCap = 1.0;

// Identity-parameterized lower-star toy problem: W are the vertex values of a
// fixed complex, the target diagram comes from target_values.
struct ToyProblem {
  std::vector<Simplex> complex;  // closed under faces
  std::vector<double> target_values;
  std::vector<double> initial_values;
  double supv_weight = 1.0;

  int vertex_count() const { return static_cast<int>(target_values.size()); }
};

// Validates and closes the simplex list under faces.
ToyProblem make_toy_problem(std::vector<Simplex> simplices,
                            std::vector<double> target_values,
                            std::vector<double> initial_values,
                            double supv_weight = 1.0);

struct OptimizerConfig {
  double lambda_topo = 1.0;
  double epsilon = 1e-2;
  std::optional<double> eta;  // empty = Auto (step_size_bound)
  int max_iters = 10000;
  // Cadence of topology configuration refresh (diagram + matching recomputed
  // when t % period == 0); 1 reproduces the per-iteration update scheme.
  int persloss_period = 200;
};

struct TheoremConstants {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0;  // Lipschitz constants of L_supv
  double lambda_topo = 0.0;
  int bar_count = 0;                    // B: off-diagonal target diagram size
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  // l0 + lB, l1 + 2lB, l2 + 5lB
};

// Exact constants for the quadratic supervision loss on [0,1]^n plus the
// bound constants derived from the target diagram cardinality.
TheoremConstants estimate_constants(const ToyProblem& problem, double lambda_topo);

// min{ 1/(2 l2 + 10 lambda B), epsilon/(4096 lambda^2 B^2) }; the second
// branch is skipped when lambda*B == 0.
double step_size_bound(const TheoremConstants& c, double epsilon);

struct TotalLoss {
  double total = 0.0;
  double supv = 0.0;
  double topo = 0.0;  // unweighted matching cost
  Matching matching;
};

// G(W) = supv_weight * sum (W_v - target_v)^2 + lambda * L_topo(W), with
// L_topo the minimal injective matching cost from the off-diagonal target
// diagram into the capped lower-star diagram of W.
TotalLoss total_loss(const ToyProblem& problem, const std::vector<double>& w,
                     double lambda_topo);

// Gradient of the total loss at w with the topology configuration (matching,
// critical vertices) frozen at w; the quantity optimize() steps on.
std::vector<double> total_loss_gradient(const ToyProblem& problem,
                                        const std::vector<double>& w,
                                        double lambda_topo);

struct TraceRow {
  int t = 0;
  double g_t_wt = 0.0;        // G_t(W_t)
  double g_t_wnext = 0.0;     // G_t(W_{t+1}), configuration held
  double g_next_wnext = 0.0;  // G_{t+1}(W_{t+1}), configuration refreshed
  double step_norm = 0.0;     // ||W_{t+1} - W_t||
  double supv = 0.0;          // L_supv(W_{t+1})
  double topo_held = 0.0;     // L_topo^t(W_{t+1})
  double topo_refreshed = 0.0; // L_topo^{t+1}(W_{t+1})
  int matched_pairs = 0;      // non-diagonal edges of gamma_t
};

enum class StopReason { Converged, MaxIters, NonFiniteLoss };

struct OptimizeResult {
  std::vector<double> w_final;
  std::vector<TraceRow> trace;
  StopReason stop_reason = StopReason::MaxIters;
  double eta = 0.0;  // step size actually used
  TheoremConstants constants;
};

// Two-step scheme: gradient step on the frozen configuration (matching and
// critical vertices held), clamp to [0,1], then refresh diagram and matching.
// Stops when the frozen-configuration decrease G_t(W_t) - G_t(W_{t+1}) falls
// below epsilon.
OptimizeResult optimize(const ToyProblem& problem, const OptimizerConfig& cfg);

// Per-iteration truth of ||W_{t+1}-W_t|| <= 2 sqrt(eta (G_t(W_t)-G_t(W_{t+1})))
// with 1e-9 slack.
std::vector<bool> verify_lemma2(const std::vector<TraceRow>& trace, double eta);

// Per-iteration truth of
// L_topo^t(W_{t+1}) - L_topo^{t+1}(W_{t+1})
//   <= 16 B sqrt(eta (G_t(W_t) - G_t(W_{t+1}))) with 1e-9 slack.
std::vector<bool> verify_lemma3(const std::vector<TraceRow>& trace,
                                const TheoremConstants& constants, double eta);

std::string trace_csv(const std::vector<TraceRow>& trace);

}  // namespace topokit
