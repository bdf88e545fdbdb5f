#pragma once

#include <utility>
#include <vector>

#include "topokit/persistence.hpp"

namespace topokit::detail_persistence {

PersistenceDiagram assemble_diagram(const FilteredComplex& fc,
                                    const std::vector<std::pair<int, int>>& rank_pairs,
                                    const std::vector<int>& essential_ranks);

}  // namespace topokit::detail_persistence
