#pragma once

#include "chipmap/gmap.hpp"
#include "chipmap/ir.hpp"

#include <map>
#include <optional>
#include <vector>

namespace chipmap {

/// A circuit as read from disk, before any compilation stage.
struct CircuitInput {
  int n_qubits = 0;
  std::vector<GateNode> gates;
  std::optional<std::map<QubitId, PartitionId>> partitions;
  std::map<PartitionId, PartitionGeometry> geometry;
  std::map<PartitionId, LayoutHint> hints;

  CircuitDag dag() const { return CircuitDag::build(gates, n_qubits); }
};

}  // namespace chipmap
