#pragma once

#include <string>
#include <vector>

#include "topokit/persistence.hpp"
#include "topokit/topo_optimizer.hpp"

namespace topokit {

// Static SVG 1.1 persistence diagram: one dot per pair (dimension-colored),
// diagonal line, infinite bars drawn at the cap. Deterministic output.
std::string svg_persistence_diagram(const PersistenceDiagram& diagram,
                                    int size_px = 480);

// Loss-trace plot: G_t(W_t), G_t(W_{t+1}) and G_{t+1}(W_{t+1}) against t.
std::string svg_trace(const std::vector<TraceRow>& trace, int width_px = 640,
                      int height_px = 400);

}  // namespace topokit
