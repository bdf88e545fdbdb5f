#pragma once

#include <string>
#include <vector>

#include "topokit/lpvi.hpp"
#include "topokit/persistence.hpp"
#include "topokit/persloss.hpp"
#include "topokit/topo_optimizer.hpp"
#include "topokit/types.hpp"

namespace topokit {

// Fixed float formatting shared by every writer: up to 17 significant digits,
// lowercase exponent, byte-stable across runs.
std::string fmt_double(double v);

// --- point clouds -----------------------------------------------------------

// Whitespace-separated coordinate triples, one point per line; '#' comments.
PointCloud read_xyz(const std::string& path);
// ASCII PLY subset: vertex elements with x/y/z properties only.
PointCloud read_ply(const std::string& path);
// Dispatch on extension (.xyz default, .ply).
PointCloud read_cloud(const std::string& path);

void write_xyz(const std::string& path, const PointCloud& cloud);
// Originals first, added points after, fourth column flags added points.
void write_xyz_augmented(const std::string& path, const LpviResult& result);

struct FlaggedCloud {
  PointCloud cloud;
  std::vector<int> added_flag;  // 0 original, 1 added
};
FlaggedCloud read_xyz_augmented(const std::string& path);

// --- diagrams ---------------------------------------------------------------

// CSV "dim,birth,death" sorted by (dim,birth,death); infinite deaths as "inf".
std::string diagram_csv(const PersistenceDiagram& diagram);
void write_diagram_csv(const std::string& path, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_csv(const std::string& path);

// --- LPVI report -------------------------------------------------------------

std::string lpvi_report_csv(const LpviReport& report);
LpviReport read_lpvi_report_csv(const std::string& path);

// --- images -------------------------------------------------------------------

// ASCII PPM (P3); channel values divided by maxval.
Image read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Image& img, int maxval = 255);

// Gradient as CSV mirroring the pixel grid: "row,col,dr,dg,db".
std::string gradient_csv(const PersLossGradient& grad);
PersLossGradient read_gradient_csv(const std::string& path);

// PersLoss result as a small JSON document (hand-formatted for byte
// stability). The reader restores the value fields and k.
std::string persloss_json(const PersLossValue& value,
                          const std::array<int, 3>& k);
std::pair<PersLossValue, std::array<int, 3>> read_persloss_json(
    const std::string& path);

// --- toy problems -------------------------------------------------------------

// Text format: "vertices N", "simplex i j [k [l]]" lines, "target v0 .. vn-1",
// "initial v0 .. vn-1", optional "supv_weight w"; '#' comments.
ToyProblem read_problem(const std::string& path);
void write_problem(const std::string& path, const ToyProblem& problem);

// --- trace ---------------------------------------------------------------------

// Reads a trace written by trace_csv; enables offline lemma re-verification.
std::vector<TraceRow> read_trace_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace topokit
