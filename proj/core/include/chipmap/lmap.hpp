#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/ir.hpp"

namespace chipmap {

/// Virtual -> physical map for every partition: the local grid of a
/// partition is translated to its placement origin on chiplet alpha.
/// Returns the registry at stage Q-sigma-alpha-phi. Throws
/// CompileError(Validation) when a local position leaves the placed rect
/// or lands on a defective qubit.
PartitionRegistry local_map(const ChipletBackend& backend, const PartitionRegistry& registry);

/// Flattened phi, indexed by virtual qubit, as global physical ids.
std::vector<int> physical_layout(const ChipletBackend& backend, const PartitionRegistry& registry);

}  // namespace chipmap
