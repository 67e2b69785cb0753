#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/gmap.hpp"
#include "chipmap/input.hpp"
#include "chipmap/metrics.hpp"
#include "chipmap/partition.hpp"
#include "chipmap/route.hpp"
#include "chipmap/sequence.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chipmap {

enum class PartitionSource { Auto, Predefined };

PartitionSource parse_partition_source(std::string_view s);

struct CompileOptions {
  /// Unset: predefined when the circuit carries partitions, else auto.
  std::optional<PartitionSource> partitions;
  KwayOptions kway;
  std::size_t gn_node_budget = 512;
  PlacementMode placement = PlacementMode::Center;
  RelativeRef relative_ref = RelativeRef::Weight;
  RoutingConfig routing;
  StatsOptions stats;
};

struct CompileResult {
  PartitionRegistry registry;  // fully enriched
  SequencedOrder order;
  std::vector<Placement> placements;
  CompiledCircuit compiled;
  CompileStats stats;
  std::vector<std::string> warnings;
};

/// partition -> sequence -> global map -> local map -> route -> metrics.
/// Failures surface as CompileError carrying the failing stage's name.
CompileResult compile(const CircuitInput& circuit, const ChipletBackend& backend, const CompileOptions& options = {});

/// Auto partitioning: community count from Girvan-Newman, then k-way
/// partitioning with the community sizes as capacities. Circuits above the
/// node budget fall back to chiplet-sized blocks (reported in warnings).
PartitionRegistry auto_partitions(const CircuitDag& dag, const ChipletBackend& backend, const CompileOptions& options,
                                  std::vector<std::string>* warnings = nullptr);

}  // namespace chipmap
