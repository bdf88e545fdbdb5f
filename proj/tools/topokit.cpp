// topokit command line: persistent homology, LPVI interpolation, PersLoss and
// the topology-aware toy optimizer over plain text formats (XYZ/PLY clouds,
// P3 images, CSV diagrams and traces, SVG plots).
//
// Exit codes: 0 success, 2 parse failure, 3 degenerate geometry, 4 LPVI
// precondition, 5 image mismatch, 6 verification failure.

#include <array>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "topokit/io.hpp"
#include "topokit/lpvi.hpp"
#include "topokit/pd_metrics.hpp"
#include "topokit/persloss.hpp"
#include "topokit/svg.hpp"
#include "topokit/topo_optimizer.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitLpvi = 4;
constexpr int kExitImage = 5;
constexpr int kExitVerification = 6;

struct PhArgs {
  std::string cloud, out, svg;
};

struct LpviArgs {
  std::string cloud, out, report;
  topokit::LpviConfig cfg;
};

struct PersLossArgs {
  std::string rendered, gt, out, grad_out;
  int k0 = 3, k1 = 2, k2 = 1;
  int max_points = 1024;
};

struct OptimizeArgs {
  std::string problem, trace, svg;
  double lambda = 1.0;
  double epsilon = 0.01;
  std::string eta = "auto";
  int max_iters = 10000;
  int period = 200;
};

int run_ph(const PhArgs& a) {
  topokit::PointCloud cloud = topokit::read_cloud(a.cloud);
  topokit::FilteredComplex fc = topokit::alpha_filtration(cloud);
  topokit::PersistenceDiagram dgm = topokit::compute_persistence(fc);
  topokit::write_diagram_csv(a.out, dgm);
  if (!a.svg.empty())
    topokit::write_text_file(a.svg, topokit::svg_persistence_diagram(dgm));
  return 0;
}

int run_lpvi(const LpviArgs& a) {
  topokit::PointCloud cloud = topokit::read_cloud(a.cloud);
  topokit::LpviResult result = topokit::lpvi(cloud, a.cfg);
  topokit::write_xyz_augmented(a.out, result);
  topokit::write_text_file(a.report, topokit::lpvi_report_csv(result.report));
  return 0;
}

int run_persloss(const PersLossArgs& a) {
  topokit::Image rendered = topokit::read_ppm(a.rendered);
  topokit::Image gt = topokit::read_ppm(a.gt);
  std::array<int, 3> k{a.k0, a.k1, a.k2};
  if (a.grad_out.empty()) {
    topokit::PersLossValue v = topokit::persloss(rendered, gt, k, a.max_points);
    topokit::write_text_file(a.out, topokit::persloss_json(v, k));
  } else {
    auto [v, grad] = topokit::persloss_gradient(rendered, gt, k, a.max_points);
    topokit::write_text_file(a.out, topokit::persloss_json(v, k));
    topokit::write_text_file(a.grad_out, topokit::gradient_csv(grad));
  }
  return 0;
}

int run_optimize(const OptimizeArgs& a) {
  topokit::ToyProblem problem = topokit::read_problem(a.problem);
  topokit::OptimizerConfig cfg;
  cfg.lambda_topo = a.lambda;
  cfg.epsilon = a.epsilon;
  cfg.max_iters = a.max_iters;
  cfg.persloss_period = a.period;
  if (a.eta != "auto") cfg.eta = std::stod(a.eta);

  topokit::OptimizeResult result = topokit::optimize(problem, cfg);
  topokit::write_text_file(a.trace, topokit::trace_csv(result.trace));
  if (!a.svg.empty())
    topokit::write_text_file(a.svg, topokit::svg_trace(result.trace));

  if (result.stop_reason == topokit::StopReason::NonFiniteLoss) {
    std::cerr << "optimize: loss became non-finite\n";
    return kExitVerification;
  }
  std::vector<bool> l2 = topokit::verify_lemma2(result.trace, result.eta);
  std::vector<bool> l3 =
      topokit::verify_lemma3(result.trace, result.constants, result.eta);
  int violations = 0;
  for (bool ok : l2)
    if (!ok) ++violations;
  for (bool ok : l3)
    if (!ok) ++violations;
  if (violations > 0) {
    std::cerr << "optimize: " << violations
              << " lemma check violation(s); see trace at " << a.trace << "\n";
    return kExitVerification;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topokit: persistent-homology toolkit"};
  app.require_subcommand(1);

  int seed = 0;
  app.add_option("--seed", seed,
                 "fixture-generation seed (all built-in subcommands are "
                 "deterministic; reserved for scripted workflows)");

  PhArgs ph;
  CLI::App* cmd_ph = app.add_subcommand("ph", "alpha persistence of a point cloud");
  cmd_ph->add_option("--cloud", ph.cloud, "input cloud (.xyz or .ply)")->required();
  cmd_ph->add_option("--out", ph.out, "output diagram CSV")->required();
  cmd_ph->add_option("--svg", ph.svg, "optional persistence diagram SVG");

  LpviArgs lp;
  CLI::App* cmd_lpvi = app.add_subcommand("lpvi", "topology-guarded interpolation");
  cmd_lpvi->add_option("--cloud", lp.cloud, "input cloud (.xyz or .ply)")->required();
  cmd_lpvi->add_option("--out", lp.out, "augmented cloud (flagged XYZ)")->required();
  cmd_lpvi->add_option("--report", lp.report, "per-neighborhood report CSV")->required();
  cmd_lpvi->add_option("--k", lp.cfg.k, "neighbors for the 3D branch");
  cmd_lpvi->add_option("--k-prime", lp.cfg.k_prime, "neighbors for the 2D branch");
  cmd_lpvi->add_option("--tau", lp.cfg.tau, "TopoDiff acceptance threshold");
  cmd_lpvi->add_option("--locality", lp.cfg.locality_factor,
                       "candidate distance cap (times k-th neighbor distance)");

  PersLossArgs pl;
  CLI::App* cmd_persloss =
      app.add_subcommand("persloss", "truncated-barcode loss between images");
  cmd_persloss->add_option("--rendered", pl.rendered, "rendered image (P3 PPM)")->required();
  cmd_persloss->add_option("--gt", pl.gt, "ground-truth image (P3 PPM)")->required();
  cmd_persloss->add_option("--out", pl.out, "output JSON")->required();
  cmd_persloss->add_option("--grad-out", pl.grad_out, "optional gradient CSV");
  cmd_persloss->add_option("--k0", pl.k0, "bars kept in H0");
  cmd_persloss->add_option("--k1", pl.k1, "bars kept in H1");
  cmd_persloss->add_option("--k2", pl.k2, "bars kept in H2");
  cmd_persloss->add_option("--max-points", pl.max_points, "RGB point budget");

  OptimizeArgs op;
  CLI::App* cmd_optimize =
      app.add_subcommand("optimize", "topology-aware toy optimization");
  cmd_optimize->add_option("--problem", op.problem, "problem file")->required();
  cmd_optimize->add_option("--trace", op.trace, "output trace CSV")->required();
  cmd_optimize->add_option("--svg", op.svg, "optional trace plot SVG");
  cmd_optimize->add_option("--lambda", op.lambda, "topology loss coefficient");
  cmd_optimize->add_option("--epsilon", op.epsilon, "stopping threshold");
  cmd_optimize->add_option("--eta", op.eta, "step size, or 'auto'");
  cmd_optimize->add_option("--max-iters", op.max_iters, "iteration cap");
  cmd_optimize->add_option("--period", op.period, "topology refresh period");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_ph->parsed()) return run_ph(ph);
    if (cmd_lpvi->parsed()) return run_lpvi(lp);
    if (cmd_persloss->parsed()) return run_persloss(pl);
    if (cmd_optimize->parsed()) return run_optimize(op);
  } catch (const topokit::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const topokit::CloudTooSmall& e) {
    std::cerr << "lpvi precondition: " << e.what() << "\n";
    return kExitLpvi;
  } catch (const topokit::KTooLarge& e) {
    std::cerr << "lpvi precondition: " << e.what() << "\n";
    return kExitLpvi;
  } catch (const topokit::DimensionMismatch& e) {
    std::cerr << "image mismatch: " << e.what() << "\n";
    return kExitImage;
  } catch (const topokit::ImageTooSmall& e) {
    std::cerr << "image mismatch: " << e.what() << "\n";
    return kExitImage;
  } catch (const topokit::DegenerateInput& e) {
    std::cerr << "degenerate geometry: " << e.what() << "\n";
    return kExitGeometry;
  } catch (const topokit::DegenerateSimplex& e) {
    std::cerr << "degenerate geometry: " << e.what() << "\n";
    return kExitGeometry;
  } catch (const topokit::RankDeficient& e) {
    std::cerr << "degenerate geometry: " << e.what() << "\n";
    return kExitGeometry;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
