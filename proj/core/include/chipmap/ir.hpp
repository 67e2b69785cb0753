#pragma once

#include "chipmap/geometry.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace chipmap {

enum class OpKind {
  Single,   // opaque one-qubit gate
  Two,      // opaque two-qubit gate
  CX,
  Swap,
  Measure,
  Reset,
  Barrier,
};

bool is_two_qubit(OpKind kind) noexcept;

/// Maps an op name to its kind. Unknown names become opaque gates by arity.
OpKind op_kind_from_name(std::string_view name, std::size_t arity);

/// Canonical lowercase name used when serializing a kind.
std::string_view canonical_name(OpKind kind) noexcept;

struct GateNode {
  OpKind kind = OpKind::Single;
  std::vector<QubitId> qubits;
  std::string name;  // original op name; opaque kinds keep it
  std::string tag;

  static GateNode make(OpKind kind, std::vector<QubitId> qubits, std::string tag = {});
};

/// Immutable logical dependency graph. Node order is the program order and
/// therefore already topological. Edges are the per-qubit last-writer
/// chains, deduplicated.
class CircuitDag {
 public:
  CircuitDag() = default;

  /// Throws CompileError(Validation) on out-of-range or duplicate operands.
  static CircuitDag build(std::vector<GateNode> gates, int n_qubits);

  int num_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<GateNode>& nodes() const noexcept { return nodes_; }
  const GateNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  const std::vector<std::vector<int>>& predecessors() const noexcept { return preds_; }

  /// Critical path length; barriers weigh zero, every other node one.
  int depth() const noexcept { return depth_; }

  /// Number of two-qubit nodes (CX, SWAP, opaque two-qubit).
  std::size_t two_qubit_count() const noexcept;
  std::size_t count(OpKind kind) const noexcept;

 private:
  int n_qubits_ = 0;
  std::vector<GateNode> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> preds_;
  int depth_ = 0;
};

struct WeightedEdge {
  int a = 0;
  int b = 0;
  double w = 0.0;
};

/// Undirected weighted graph over dense node ids. Used both for the qubit
/// interaction graph and for the partitioner's inputs.
class InteractionGraph {
 public:
  explicit InteractionGraph(int n_nodes = 0);

  void add_weight(int a, int b, double w);

  int num_nodes() const noexcept { return static_cast<int>(adj_.size()); }
  std::size_t num_edges() const noexcept { return weights_.size(); }
  double weight(int a, int b) const;
  double total_weight() const noexcept;
  double weighted_degree(int v) const;

  /// Edges with a < b, sorted lexicographically.
  std::vector<WeightedEdge> edges() const;
  const std::vector<std::pair<int, double>>& neighbors(int v) const { return adj_[v]; }

  InteractionGraph scaled(double factor) const;

 private:
  std::map<std::pair<int, int>, double> weights_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
};

/// Edge weight = multiplicity of two-qubit gates on the unordered pair.
InteractionGraph interaction_graph(const CircuitDag& dag);

struct PartitionGeometry {
  int width = 0;
  int height = 0;
  std::map<QubitId, LocalPos> locals;
};

struct Partition {
  PartitionId id = 0;
  std::vector<QubitId> qubits;  // sorted ascending
  int width = 0;
  int height = 0;
  std::map<QubitId, LocalPos> locals;  // complete once the registry is built

  std::optional<int> sigma;
  std::optional<Placement> placement;
  std::optional<std::map<QubitId, PhysCoord>> phi;

  std::optional<ChipId> alpha() const {
    return placement ? std::optional<ChipId>(placement->chip) : std::nullopt;
  }
};

enum class Stage { Q, QSigma, QSigmaAlpha, QSigmaAlphaPhi };

const char* to_string(Stage stage) noexcept;

struct SigmaPayload {
  std::map<PartitionId, int> sigma;
};
struct AlphaPayload {
  std::vector<Placement> placements;
};
struct PhiPayload {
  std::map<PartitionId, std::map<QubitId, PhysCoord>> phi;
};
using StagePayload = std::variant<SigmaPayload, AlphaPayload, PhiPayload>;

/// The set of partitions, enriched one stage at a time. Enrichment returns
/// a new registry; fields set at earlier stages are never touched.
class PartitionRegistry {
 public:
  PartitionRegistry() = default;

  /// Validates disjointness, coverage of 0..n_qubits-1 and box geometry.
  /// Missing locals are filled row-major by ascending qubit id.
  PartitionRegistry(std::vector<Partition> partitions, int n_qubits);

  Stage stage() const noexcept { return stage_; }
  int num_qubits() const noexcept { return n_qubits_; }
  const std::vector<Partition>& partitions() const noexcept { return partitions_; }
  std::size_t size() const noexcept { return partitions_.size(); }

  const Partition& at(PartitionId id) const;
  bool contains(PartitionId id) const { return index_.count(id) != 0; }
  PartitionId partition_of(QubitId q) const { return owner_.at(static_cast<std::size_t>(q)); }
  std::span<const PartitionId> owners() const noexcept { return owner_; }

  friend PartitionRegistry enrich(const PartitionRegistry& registry, const StagePayload& payload);

 private:
  std::vector<Partition> partitions_;  // ascending id
  std::map<PartitionId, std::size_t> index_;
  std::vector<PartitionId> owner_;
  int n_qubits_ = 0;
  Stage stage_ = Stage::Q;
};

/// Advances the registry by exactly one stage. Throws CompileError(StageOrder)
/// on a skip or regression, Validation when the payload misses a partition.
PartitionRegistry enrich(const PartitionRegistry& registry, const StagePayload& payload);

/// Squarest w x h box (w >= h, w - h <= 1) holding n cells with least area.
std::pair<int, int> squarest_box(std::size_t n);

}  // namespace chipmap
