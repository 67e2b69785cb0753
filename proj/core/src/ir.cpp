#include "chipmap/ir.hpp"

#include "chipmap/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace chipmap {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::NoFit: return "no-fit";
    case ErrorKind::NoRoute: return "no-route";
    case ErrorKind::StrictPatchViolation: return "strict-patch-violation";
    case ErrorKind::StageOrder: return "stage-order";
  }
  return "unknown";
}

CompileError::CompileError(ErrorKind kind, std::string stage, const std::string& message,
                           std::optional<long> entity)
    : std::runtime_error(stage + ": " + message), kind_(kind), stage_(std::move(stage)), entity_(entity) {}

bool is_two_qubit(OpKind kind) noexcept {
  return kind == OpKind::Two || kind == OpKind::CX || kind == OpKind::Swap;
}

OpKind op_kind_from_name(std::string_view name, std::size_t arity) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cx" || lower == "cnot") return OpKind::CX;
  if (lower == "swap") return OpKind::Swap;
  if (lower == "measure" || lower == "m" || lower == "mz" || lower == "mr") return OpKind::Measure;
  if (lower == "reset" || lower == "r" || lower == "rz_reset") return OpKind::Reset;
  if (lower == "barrier" || lower == "tick") return OpKind::Barrier;
  if (arity == 2) return OpKind::Two;
  if (arity == 1) return OpKind::Single;
  fail(ErrorKind::Validation, "ir", "gate '" + std::string(name) + "' has unsupported arity " +
                                        std::to_string(arity));
}

std::string_view canonical_name(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::Single: return "u";
    case OpKind::Two: return "u2";
    case OpKind::CX: return "cx";
    case OpKind::Swap: return "swap";
    case OpKind::Measure: return "measure";
    case OpKind::Reset: return "reset";
    case OpKind::Barrier: return "barrier";
  }
  return "u";
}

GateNode GateNode::make(OpKind kind, std::vector<QubitId> qubits, std::string tag) {
  GateNode g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  g.name = std::string(canonical_name(kind));
  g.tag = std::move(tag);
  return g;
}

CircuitDag CircuitDag::build(std::vector<GateNode> gates, int n_qubits) {
  if (n_qubits < 0) fail(ErrorKind::Validation, "ir", "negative qubit count");
  CircuitDag dag;
  dag.n_qubits_ = n_qubits;
  dag.preds_.resize(gates.size());

  std::vector<int> last(static_cast<std::size_t>(n_qubits), -1);
  std::vector<int> level(gates.size(), 0);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const GateNode& g = gates[i];
    if (g.qubits.empty()) fail(ErrorKind::Validation, "ir", "gate without operands", static_cast<long>(i));
    if (g.kind != OpKind::Barrier) {
      const std::size_t want = is_two_qubit(g.kind) ? 2 : 1;
      if (g.qubits.size() != want) {
        fail(ErrorKind::Validation, "ir",
             "gate " + std::to_string(i) + " expects " + std::to_string(want) + " operands",
             static_cast<long>(i));
      }
    }
    std::set<QubitId> seen;
    for (QubitId q : g.qubits) {
      if (q < 0 || q >= n_qubits) {
        fail(ErrorKind::Validation, "ir", "operand " + std::to_string(q) + " out of range in gate " + std::to_string(i),
             static_cast<long>(i));
      }
      if (!seen.insert(q).second) {
        fail(ErrorKind::Validation, "ir", "duplicate operand " + std::to_string(q) + " in gate " + std::to_string(i),
             static_cast<long>(i));
      }
    }

    auto& preds = dag.preds_[i];
    for (QubitId q : g.qubits) {
      const int p = last[static_cast<std::size_t>(q)];
      if (p >= 0 && std::find(preds.begin(), preds.end(), p) == preds.end()) preds.push_back(p);
      last[static_cast<std::size_t>(q)] = static_cast<int>(i);
    }
    std::sort(preds.begin(), preds.end());
    int base = 0;
    for (int p : preds) {
      dag.edges_.emplace_back(p, static_cast<int>(i));
      base = std::max(base, level[static_cast<std::size_t>(p)]);
    }
    level[i] = base + (g.kind == OpKind::Barrier ? 0 : 1);
    dag.depth_ = std::max(dag.depth_, level[i]);
  }
  dag.nodes_ = std::move(gates);
  return dag;
}

std::size_t CircuitDag::two_qubit_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const GateNode& g) { return is_two_qubit(g.kind); }));
}

std::size_t CircuitDag::count(OpKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [kind](const GateNode& g) { return g.kind == kind; }));
}

InteractionGraph::InteractionGraph(int n_nodes) : adj_(static_cast<std::size_t>(std::max(n_nodes, 0))) {}

void InteractionGraph::add_weight(int a, int b, double w) {
  if (a == b) return;
  if (a > b) std::swap(a, b);
  const int n = num_nodes();
  if (a < 0 || b >= n) fail(ErrorKind::Validation, "ir", "interaction edge out of range");
  auto [it, inserted] = weights_.try_emplace({a, b}, 0.0);
  it->second += w;
  auto bump = [&](int from, int to) {
    auto& row = adj_[static_cast<std::size_t>(from)];
    if (inserted) {
      row.insert(std::lower_bound(row.begin(), row.end(), std::make_pair(to, -1e300)), {to, w});
      return;
    }
    for (auto& entry : row) {
      if (entry.first == to) entry.second += w;
    }
  };
  bump(a, b);
  bump(b, a);
}

double InteractionGraph::weight(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = weights_.find({a, b});
  return it == weights_.end() ? 0.0 : it->second;
}

double InteractionGraph::total_weight() const noexcept {
  double sum = 0.0;
  for (const auto& [_, w] : weights_) sum += w;
  return sum;
}

double InteractionGraph::weighted_degree(int v) const {
  double sum = 0.0;
  for (const auto& [_, w] : neighbors(v)) sum += w;
  return sum;
}

std::vector<WeightedEdge> InteractionGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(weights_.size());
  for (const auto& [key, w] : weights_) out.push_back({key.first, key.second, w});
  return out;
}

InteractionGraph InteractionGraph::scaled(double factor) const {
  InteractionGraph out(num_nodes());
  for (const auto& [key, w] : weights_) out.add_weight(key.first, key.second, w * factor);
  return out;
}

InteractionGraph interaction_graph(const CircuitDag& dag) {
  InteractionGraph g(dag.num_qubits());
  for (const GateNode& node : dag.nodes()) {
    if (is_two_qubit(node.kind)) g.add_weight(node.qubits[0], node.qubits[1], 1.0);
  }
  return g;
}

const char* to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Q: return "Q";
    case Stage::QSigma: return "Q-sigma";
    case Stage::QSigmaAlpha: return "Q-sigma-alpha";
    case Stage::QSigmaAlphaPhi: return "Q-sigma-alpha-phi";
  }
  return "?";
}

std::pair<int, int> squarest_box(std::size_t n) {
  if (n == 0) return {0, 0};
  int w = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (static_cast<std::size_t>(w - 1) * static_cast<std::size_t>(w - 1) >= n) --w;
  while (static_cast<std::size_t>(w) * static_cast<std::size_t>(w) < n) ++w;
  const int h = static_cast<int>((n + static_cast<std::size_t>(w) - 1) / static_cast<std::size_t>(w));
  return {w, h};
}

PartitionRegistry::PartitionRegistry(std::vector<Partition> partitions, int n_qubits)
    : n_qubits_(n_qubits) {
  std::sort(partitions.begin(), partitions.end(),
            [](const Partition& a, const Partition& b) { return a.id < b.id; });
  owner_.assign(static_cast<std::size_t>(n_qubits), -1);
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    Partition& p = partitions[i];
    if (!index_.emplace(p.id, i).second) {
      fail(ErrorKind::Validation, "ir", "duplicate partition id " + std::to_string(p.id), p.id);
    }
    if (p.qubits.empty()) fail(ErrorKind::Validation, "ir", "partition " + std::to_string(p.id) + " is empty", p.id);
    std::sort(p.qubits.begin(), p.qubits.end());
    for (QubitId q : p.qubits) {
      if (q < 0 || q >= n_qubits) {
        fail(ErrorKind::Validation, "ir", "partition qubit " + std::to_string(q) + " out of range", p.id);
      }
      auto& owner = owner_[static_cast<std::size_t>(q)];
      if (owner != -1 && owner != p.id) {
        fail(ErrorKind::Validation, "ir", "qubit " + std::to_string(q) + " in two partitions", p.id);
      }
      if (owner == p.id) fail(ErrorKind::Validation, "ir", "qubit listed twice in partition", p.id);
      owner = p.id;
    }
    if (p.width <= 0 || p.height <= 0) {
      auto [w, h] = squarest_box(p.qubits.size());
      p.width = w;
      p.height = h;
    }
    if (static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.height) < p.qubits.size()) {
      fail(ErrorKind::Validation, "ir", "partition box smaller than its qubit count", p.id);
    }

    std::set<LocalPos> used;
    for (const auto& [q, pos] : p.locals) {
      if (!std::binary_search(p.qubits.begin(), p.qubits.end(), q)) {
        fail(ErrorKind::Validation, "ir", "local position for foreign qubit " + std::to_string(q), p.id);
      }
      if (pos.row < 0 || pos.col < 0 || pos.row >= p.height || pos.col >= p.width) {
        fail(ErrorKind::Validation, "ir", "local position of qubit " + std::to_string(q) + " outside box", p.id);
      }
      if (!used.insert(pos).second) {
        fail(ErrorKind::Validation, "ir", "duplicate local position in partition " + std::to_string(p.id), p.id);
      }
    }
    // Remaining qubits take the free cells row-major, ascending id.
    int cell = 0;
    for (QubitId q : p.qubits) {
      if (p.locals.count(q)) continue;
      LocalPos pos{cell / p.width, cell % p.width};
      while (used.count(pos)) {
        ++cell;
        pos = {cell / p.width, cell % p.width};
      }
      used.insert(pos);
      p.locals.emplace(q, pos);
      ++cell;
    }
  }
  for (std::size_t q = 0; q < owner_.size(); ++q) {
    if (owner_[q] == -1) {
      fail(ErrorKind::Validation, "ir", "qubit " + std::to_string(q) + " belongs to no partition",
           static_cast<long>(q));
    }
  }
  partitions_ = std::move(partitions);
}

const Partition& PartitionRegistry::at(PartitionId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(ErrorKind::Validation, "ir", "unknown partition " + std::to_string(id), id);
  return partitions_[it->second];
}

namespace {

Stage payload_stage(const StagePayload& payload) {
  struct Visitor {
    Stage operator()(const SigmaPayload&) const { return Stage::QSigma; }
    Stage operator()(const AlphaPayload&) const { return Stage::QSigmaAlpha; }
    Stage operator()(const PhiPayload&) const { return Stage::QSigmaAlphaPhi; }
  };
  return std::visit(Visitor{}, payload);
}

}  // namespace

PartitionRegistry enrich(const PartitionRegistry& registry, const StagePayload& payload) {
  const Stage target = payload_stage(payload);
  if (static_cast<int>(target) != static_cast<int>(registry.stage()) + 1) {
    fail(ErrorKind::StageOrder, "ir",
         std::string("cannot enrich registry at stage ") + to_string(registry.stage()) + " to " + to_string(target));
  }
  PartitionRegistry next = registry;
  next.stage_ = target;

  if (const auto* sigma = std::get_if<SigmaPayload>(&payload)) {
    std::set<int> used;
    for (Partition& p : next.partitions_) {
      auto it = sigma->sigma.find(p.id);
      if (it == sigma->sigma.end()) fail(ErrorKind::Validation, "ir", "sigma missing for partition", p.id);
      if (!used.insert(it->second).second) fail(ErrorKind::Validation, "ir", "sigma index reused", p.id);
      p.sigma = it->second;
    }
    if (sigma->sigma.size() != next.partitions_.size()) {
      fail(ErrorKind::Validation, "ir", "sigma payload names unknown partitions");
    }
  } else if (const auto* alpha = std::get_if<AlphaPayload>(&payload)) {
    std::map<PartitionId, const Placement*> by_id;
    for (const Placement& pl : alpha->placements) {
      if (!next.contains(pl.partition)) {
        fail(ErrorKind::Validation, "ir", "placement for unknown partition", pl.partition);
      }
      if (!by_id.emplace(pl.partition, &pl).second) {
        fail(ErrorKind::Validation, "ir", "partition placed twice", pl.partition);
      }
    }
    for (Partition& p : next.partitions_) {
      auto it = by_id.find(p.id);
      if (it == by_id.end()) fail(ErrorKind::Validation, "ir", "placement missing for partition", p.id);
      if (it->second->rect.w != p.width || it->second->rect.h != p.height) {
        fail(ErrorKind::Validation, "ir", "placement size differs from partition box", p.id);
      }
      p.placement = *it->second;
    }
  } else {
    const auto& phi = std::get<PhiPayload>(payload);
    for (Partition& p : next.partitions_) {
      auto it = phi.phi.find(p.id);
      if (it == phi.phi.end()) fail(ErrorKind::Validation, "ir", "phi missing for partition", p.id);
      for (QubitId q : p.qubits) {
        if (!it->second.count(q)) fail(ErrorKind::Validation, "ir", "phi misses qubit " + std::to_string(q), p.id);
      }
      if (it->second.size() != p.qubits.size()) {
        fail(ErrorKind::Validation, "ir", "phi maps foreign qubits", p.id);
      }
      p.phi = it->second;
    }
  }
  return next;
}

}  // namespace chipmap
