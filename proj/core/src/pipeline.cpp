#include "chipmap/pipeline.hpp"

#include "chipmap/error.hpp"
#include "chipmap/lmap.hpp"

#include <chrono>

namespace chipmap {

PartitionSource parse_partition_source(std::string_view s) {
  if (s == "auto") return PartitionSource::Auto;
  if (s == "predefined") return PartitionSource::Predefined;
  fail(ErrorKind::Validation, "partition", "unknown partition source '" + std::string(s) + "'");
}

PartitionRegistry auto_partitions(const CircuitDag& dag, const ChipletBackend& backend, const CompileOptions& options,
                                  std::vector<std::string>* warnings) {
  const InteractionGraph g = interaction_graph(dag);
  const int n = g.num_nodes();
  if (n == 0) fail(ErrorKind::Validation, "partition", "circuit has no qubits");
  int k = 0;
  std::vector<int> caps;
  if (static_cast<std::size_t>(n) <= options.gn_node_budget) {
    const CommunityEstimate est = estimate_partition_count(g, options.gn_node_budget);
    k = est.k;
    caps = est.target_sizes;
  } else {
    const int per_chip = backend.qubits_per_chiplet();
    k = (n + per_chip - 1) / per_chip;
    caps.assign(static_cast<std::size_t>(k), (n + k - 1) / k);
    if (warnings) {
      warnings->push_back("circuit exceeds the community-detection budget of " + std::to_string(options.gn_node_budget) +
                          " qubits; using " + std::to_string(k) + " chiplet-sized blocks");
    }
  }
  const KwayResult blocks = kway_partition(g, k, caps, options.kway);
  return registry_from_blocks(blocks.block_of, n);
}

CompileResult compile(const CircuitInput& circuit, const ChipletBackend& backend, const CompileOptions& options) {
  using clock = std::chrono::steady_clock;
  options.routing.validate();
  CompileResult result;
  std::vector<std::pair<std::string, double>> timings;
  auto t0 = clock::now();
  auto lap = [&](const char* stage) {
    const auto now = clock::now();
    timings.emplace_back(stage, std::chrono::duration<double>(now - t0).count());
    t0 = now;
  };

  const CircuitDag dag = circuit.dag();
  const PartitionSource source =
      options.partitions.value_or(circuit.partitions ? PartitionSource::Predefined : PartitionSource::Auto);
  PartitionRegistry registry;
  if (source == PartitionSource::Predefined) {
    if (!circuit.partitions) fail(ErrorKind::Validation, "partition", "circuit carries no partitions");
    registry = predefined_partitions(dag, *circuit.partitions, circuit.geometry);
  } else {
    registry = auto_partitions(dag, backend, options, &result.warnings);
  }
  lap("partition");

  const PartitionGraph pg = build_partition_graph(registry, dag);
  result.order = sequence(pg);
  registry = enrich(registry, SigmaPayload{result.order.sigma});
  lap("sequence");

  GlobalMapOptions gopts;
  gopts.mode = options.placement;
  gopts.relative_ref = options.relative_ref;
  if (source == PartitionSource::Predefined) gopts.hints = circuit.hints;
  GlobalMapResult gm = global_map(backend, result.order, registry, pg, gopts);
  result.placements = std::move(gm.placements);
  lap("gmap");

  result.registry = local_map(backend, gm.registry);
  lap("lmap");

  result.compiled = route_circuit(dag, result.registry, backend, options.routing);
  lap("route");

  result.stats = stats(dag, result.compiled, backend, result.registry, options.stats);
  lap("metrics");
  result.stats.wall_time = std::move(timings);

  for (const auto& w : backend.warnings()) result.warnings.push_back(w);
  for (const auto& w : result.compiled.warnings) result.warnings.push_back(w);
  return result;
}

}  // namespace chipmap
