#include "chipmap/route.hpp"

#include "chipmap/error.hpp"
#include "chipmap/lmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chipmap {

RoutingPolicy parse_routing_policy(std::string_view s) {
  if (s == "basic") return RoutingPolicy::Basic;
  if (s == "focus") return RoutingPolicy::Focus;
  if (s == "tradeoff") return RoutingPolicy::Tradeoff;
  if (s == "custom") return RoutingPolicy::Custom;
  fail(ErrorKind::Validation, "route", "unknown routing policy '" + std::string(s) + "'");
}

const char* to_string(RoutingPolicy p) noexcept {
  switch (p) {
    case RoutingPolicy::Basic: return "basic";
    case RoutingPolicy::Focus: return "focus";
    case RoutingPolicy::Tradeoff: return "tradeoff";
    case RoutingPolicy::Custom: return "custom";
  }
  return "basic";
}

RoutingConfig RoutingConfig::for_policy(RoutingPolicy policy) {
  RoutingConfig cfg;
  cfg.policy = policy;
  switch (policy) {
    case RoutingPolicy::Basic:
    case RoutingPolicy::Custom: break;
    case RoutingPolicy::Focus: cfg.alpha = 1e4; break;
    case RoutingPolicy::Tradeoff:
      cfg.alpha = 1e3;
      cfg.beta = 1.0;
      break;
  }
  return cfg;
}

void RoutingConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) fail(ErrorKind::Validation, "route", "alpha and beta must be non-negative");
  if (k_nearest < 1) fail(ErrorKind::Validation, "route", "k_nearest must be at least 1");
  switch (policy) {
    case RoutingPolicy::Basic:
      if (alpha != 0.0 || beta != 0.0) fail(ErrorKind::Validation, "route", "basic routing requires alpha = beta = 0");
      break;
    case RoutingPolicy::Focus:
      if (beta != 0.0 || alpha <= 0.0) fail(ErrorKind::Validation, "route", "focus routing requires alpha > 0, beta = 0");
      break;
    case RoutingPolicy::Tradeoff:
      if (alpha <= 0.0 || beta <= 0.0) fail(ErrorKind::Validation, "route", "tradeoff routing requires alpha, beta > 0");
      break;
    case RoutingPolicy::Custom: break;
  }
}

double path_cost(std::size_t hops, double epsilon, int usage, const RoutingConfig& cfg) noexcept {
  return static_cast<double>(hops) + cfg.alpha * epsilon + cfg.beta * static_cast<double>(usage);
}

double path_cost(std::span<const int> path, const InterChipLink& link, int usage, const RoutingConfig& cfg) noexcept {
  const std::size_t hops = path.empty() ? 0 : path.size() - 1;
  return path_cost(hops, link.epsilon, usage, cfg);
}

struct Router::Search {
  std::vector<int> dist;
  std::vector<int> pen;
  std::vector<int> pred;
};

Router::Router(const ChipletBackend& backend, RoutingConfig cfg)
    : backend_(&backend), cfg_(cfg), adj_(coupling_graph(backend).adjacency) {
  cfg_.validate();
  const auto n = static_cast<std::size_t>(backend.num_qubits());
  usage_.assign(backend.links().size(), 0);
  traversals_.assign(backend.links().size(), 0);
  occ_.assign(n, -1);
}

void Router::set_layout(std::span<const int> layout, std::span<const PartitionId> partition_of_virtual) {
  if (layout.size() != partition_of_virtual.size()) {
    fail(ErrorKind::Validation, "route", "layout and partition labels differ in length");
  }
  std::fill(occ_.begin(), occ_.end(), -1);
  pos_.assign(layout.begin(), layout.end());
  part_.assign(partition_of_virtual.begin(), partition_of_virtual.end());
  for (std::size_t v = 0; v < pos_.size(); ++v) {
    const int p = pos_[v];
    if (p < 0 || p >= backend_->num_qubits() || backend_->is_defective(p)) {
      fail(ErrorKind::Validation, "route", "virtual qubit " + std::to_string(v) + " has no usable physical qubit",
           static_cast<long>(v));
    }
    if (occ_[static_cast<std::size_t>(p)] != -1) {
      fail(ErrorKind::Validation, "route", "layout is not injective", static_cast<long>(v));
    }
    occ_[static_cast<std::size_t>(p)] = static_cast<int>(v);
  }
}

// Layered BFS: every node of layer d is expanded before any node of layer
// d+1, so the (occupied count, predecessor id) tie-break on layer d+1 is
// final by the time those nodes expand. Equivalent to Dijkstra with unit
// weights and a lexicographic secondary key.
void Router::search(int src, int chip, int stop_at, Search& s) const {
  const auto n = static_cast<std::size_t>(backend_->num_qubits());
  s.dist.assign(n, -1);
  s.pen.assign(n, 0);
  s.pred.assign(n, -1);
  std::vector<int> queue;
  queue.reserve(256);
  s.dist[static_cast<std::size_t>(src)] = 0;
  queue.push_back(src);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    const int du = s.dist[static_cast<std::size_t>(u)];
    if (stop_at >= 0 && s.dist[static_cast<std::size_t>(stop_at)] >= 0 &&
        du >= s.dist[static_cast<std::size_t>(stop_at)]) {
      break;
    }
    for (int v : adj_[static_cast<std::size_t>(u)]) {
      if (chip >= 0 && backend_->chip_of(v) != chip) continue;
      const auto vi = static_cast<std::size_t>(v);
      const int cand = s.pen[static_cast<std::size_t>(u)] + (occ_[vi] >= 0 ? 1 : 0);
      if (s.dist[vi] < 0) {
        s.dist[vi] = du + 1;
        s.pen[vi] = cand;
        s.pred[vi] = u;
        queue.push_back(v);
      } else if (s.dist[vi] == du + 1 && (cand < s.pen[vi] || (cand == s.pen[vi] && u < s.pred[vi]))) {
        s.pen[vi] = cand;
        s.pred[vi] = u;
      }
    }
  }
}

std::vector<int> Router::trace(const Search& s, int src, int dst) const {
  if (s.dist[static_cast<std::size_t>(dst)] < 0) return {};
  std::vector<int> path;
  for (int v = dst; v != src; v = s.pred[static_cast<std::size_t>(v)]) path.push_back(v);
  path.push_back(src);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> Router::shortest_path(int src, int dst, int chip) const {
  Search s;
  search(src, chip, dst, s);
  return trace(s, src, dst);
}

std::vector<int> Router::links_between(ChipId a, ChipId b) const {
  std::vector<int> out;
  const auto& links = backend_->links();
  for (std::size_t i = 0; i < links.size(); ++i) {
    if ((links[i].a.chip == a && links[i].b.chip == b) || (links[i].a.chip == b && links[i].b.chip == a)) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

Router::LinkChoice Router::choose_crossing(int cur, int dst, int from, int to) const {
  const ChipId from_chip = backend_->chip_of(from);
  const ChipId to_chip = backend_->chip_of(to);
  const auto crossing = backend_->link_between(from, to);
  if (!crossing) fail(ErrorKind::NoRoute, "route", "path crosses chiplets without a link");

  auto near_end = [&](int link) {
    const InterChipLink& l = backend_->links()[static_cast<std::size_t>(link)];
    return l.a.chip == from_chip ? std::pair{l.a, l.b} : std::pair{l.b, l.a};
  };
  const PhysCoord anchor = near_end(*crossing).first;
  std::vector<std::pair<int, int>> ranked;  // (distance to crossing, link)
  for (int link : links_between(from_chip, to_chip)) {
    const PhysCoord a = near_end(link).first;
    ranked.emplace_back(manhattan(a.x, a.y, anchor.x, anchor.y), link);
  }
  std::sort(ranked.begin(), ranked.end());
  if (ranked.size() > static_cast<std::size_t>(cfg_.k_nearest)) ranked.resize(static_cast<std::size_t>(cfg_.k_nearest));

  Search near, far;
  search(cur, from_chip, -1, near);
  search(dst, -1, -1, far);

  LinkChoice best;
  int best_pen = 0;
  for (const auto& [_, link] : ranked) {
    const auto [a, b] = near_end(link);
    const int ia = backend_->global_id(a);
    const int ib = backend_->global_id(b);
    const int da = near.dist[static_cast<std::size_t>(ia)];
    const int db = far.dist[static_cast<std::size_t>(ib)];
    if (da < 0 || db < 0) continue;
    const auto hops = static_cast<std::size_t>(da + 1 + db);
    const double cost = path_cost(hops, backend_->links()[static_cast<std::size_t>(link)].epsilon,
                                  usage_[static_cast<std::size_t>(link)], cfg_);
    const int pen = near.pen[static_cast<std::size_t>(ia)] + far.pen[static_cast<std::size_t>(ib)];
    const bool better = best.link < 0 || cost < best.cost - 1e-12 ||
                        (std::abs(cost - best.cost) <= 1e-12 && pen < best_pen);
    if (better) {
      best.link = link;
      best.cost = cost;
      best_pen = pen;
      best.path = trace(near, cur, ia);
      best.path.push_back(ib);
    }
  }
  if (best.link < 0) {
    fail(ErrorKind::NoRoute, "route",
         "no functional link reachable between chiplets " + std::to_string(from_chip) + " and " +
             std::to_string(to_chip),
         from_chip);
  }
  return best;
}

Router::LinkChoice Router::select_link(int src, int dst) {
  const auto initial = shortest_path(src, dst);
  if (initial.empty()) fail(ErrorKind::NoRoute, "route", "qubits " + std::to_string(src) + " and " + std::to_string(dst) + " are disconnected");
  for (std::size_t i = 0; i + 1 < initial.size(); ++i) {
    if (backend_->chip_of(initial[i]) == backend_->chip_of(initial[i + 1])) continue;
    LinkChoice choice = choose_crossing(src, dst, initial[i], initial[i + 1]);
    const auto rest = shortest_path(choice.path.back(), dst);
    choice.path.insert(choice.path.end(), rest.begin() + 1, rest.end());
    ++usage_[static_cast<std::size_t>(choice.link)];
    return choice;
  }
  fail(ErrorKind::NoRoute, "route", "shortest path between the qubits never leaves its chiplet");
}

std::vector<int> Router::find_path(int src, int dst) {
  std::vector<int> path{src};
  int cur = src;
  const int guard = 4 * backend_->num_chiplets() + 4;
  for (int step = 0; step < guard; ++step) {
    const auto sp = shortest_path(cur, dst);
    if (sp.empty()) {
      fail(ErrorKind::NoRoute, "route",
           "physical qubits " + std::to_string(src) + " and " + std::to_string(dst) + " are disconnected", src);
    }
    std::size_t cross = sp.size();
    for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
      if (backend_->chip_of(sp[i]) != backend_->chip_of(sp[i + 1])) {
        cross = i;
        break;
      }
    }
    if (cross == sp.size()) {
      path.insert(path.end(), sp.begin() + 1, sp.end());
      cur = dst;
      break;
    }
    const LinkChoice choice = choose_crossing(cur, dst, sp[cross], sp[cross + 1]);
    path.insert(path.end(), choice.path.begin() + 1, choice.path.end());
    cur = choice.path.back();
    if (cur == dst) break;
  }
  if (cur != dst) fail(ErrorKind::NoRoute, "route", "routing did not converge", src);

  // Cut any loop introduced by a detour back across a boundary.
  std::vector<int> simple;
  std::vector<int> index(static_cast<std::size_t>(backend_->num_qubits()), -1);
  for (int v : path) {
    if (index[static_cast<std::size_t>(v)] >= 0) {
      const auto keep = static_cast<std::size_t>(index[static_cast<std::size_t>(v)]) + 1;
      for (std::size_t i = keep; i < simple.size(); ++i) index[static_cast<std::size_t>(simple[i])] = -1;
      simple.resize(keep);
      continue;
    }
    index[static_cast<std::size_t>(v)] = static_cast<int>(simple.size());
    simple.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < simple.size(); ++i) {
    if (auto link = backend_->link_between(simple[i], simple[i + 1])) ++usage_[static_cast<std::size_t>(*link)];
  }
  return simple;
}

void Router::apply_swap(int p, int q) {
  auto& a = occ_[static_cast<std::size_t>(p)];
  auto& b = occ_[static_cast<std::size_t>(q)];
  std::swap(a, b);
  if (a >= 0) pos_[static_cast<std::size_t>(a)] = p;
  if (b >= 0) pos_[static_cast<std::size_t>(b)] = q;
}

void Router::emit_two(OpKind kind, const std::string& name, int p, int q, const std::string& tag,
                      std::vector<GateNode>& out) {
  if (!backend_->coupled(p, q)) {
    fail(ErrorKind::NoRoute, "route", "internal error: emitted gate on uncoupled qubits", p);
  }
  GateNode g;
  g.kind = kind;
  g.qubits = {p, q};
  g.name = name;
  g.tag = tag;
  out.push_back(std::move(g));
  if (auto link = backend_->link_between(p, q)) ++traversals_[static_cast<std::size_t>(*link)];
}

// A SWAP moving token `mover` onto `target_phys` exchanges it with the
// target's occupant; it breaks a patch when both share a partition.
bool Router::swap_violates(int mover, int target_phys) const {
  const int other = occ_[static_cast<std::size_t>(target_phys)];
  return other >= 0 && part_[static_cast<std::size_t>(other)] == part_[static_cast<std::size_t>(mover)];
}

void Router::route_gate(const GateNode& gate, std::vector<GateNode>& out) {
  if (!is_two_qubit(gate.kind)) {
    GateNode g = gate;
    for (QubitId& q : g.qubits) q = pos_.at(static_cast<std::size_t>(q));
    out.push_back(std::move(g));
    return;
  }
  const int v1 = gate.qubits[0];
  const int v2 = gate.qubits[1];
  const int p1 = pos_.at(static_cast<std::size_t>(v1));
  const int p2 = pos_.at(static_cast<std::size_t>(v2));
  if (backend_->coupled(p1, p2)) {
    if (auto link = backend_->link_between(p1, p2)) ++usage_[static_cast<std::size_t>(*link)];
    emit_two(gate.kind, gate.name, p1, p2, gate.tag, out);
    return;
  }

  const bool same_patch = part_[static_cast<std::size_t>(v1)] == part_[static_cast<std::size_t>(v2)];
  if (same_patch) {
    const std::string msg = "gate on qubits " + std::to_string(v1) + "," + std::to_string(v2) + " of partition " +
                            std::to_string(part_[static_cast<std::size_t>(v1)]) + " needs routing";
    if (cfg_.strict_patches) fail(ErrorKind::StrictPatchViolation, "route", msg, part_[static_cast<std::size_t>(v1)]);
    warnings_.push_back(msg);
    ++violations_;
  }

  const std::vector<int> path = find_path(p1, p2);
  const int hops = static_cast<int>(path.size()) - 1;

  // Gate fires across edge (path[m], path[m+1]); token v1 walks to m and
  // token v2 walks back to m+1. Any m costs hops-1 SWAPs, so pick the one
  // nearest the midpoint that keeps each token out of its own patch.
  auto violates = [&](int m) {
    for (int i = 1; i <= m; ++i) {
      if (swap_violates(v1, path[static_cast<std::size_t>(i)])) return true;
    }
    for (int j = hops - 1; j > m; --j) {
      if (swap_violates(v2, path[static_cast<std::size_t>(j)])) return true;
    }
    return false;
  };
  const int mid = hops / 2;
  int split = -1;
  for (int off = 0; off < hops && split < 0; ++off) {
    for (int m : {mid - off, mid + off}) {
      if (m < 0 || m > hops - 1) continue;
      if (!violates(m)) {
        split = m;
        break;
      }
    }
  }
  if (split < 0) {
    const std::string msg = "routing gate on qubits " + std::to_string(v1) + "," + std::to_string(v2) +
                            " must swap qubits of one partition";
    if (cfg_.strict_patches) fail(ErrorKind::StrictPatchViolation, "route", msg, part_[static_cast<std::size_t>(v1)]);
    warnings_.push_back(msg);
    ++violations_;
    split = mid;
  }

  std::vector<std::pair<int, int>> swaps;
  for (int i = 1; i <= split; ++i) swaps.emplace_back(path[static_cast<std::size_t>(i - 1)], path[static_cast<std::size_t>(i)]);
  for (int j = hops - 1; j > split; --j) swaps.emplace_back(path[static_cast<std::size_t>(j + 1)], path[static_cast<std::size_t>(j)]);

  for (auto [a, b] : swaps) {
    emit_two(OpKind::Swap, "swap", a, b, "route", out);
    apply_swap(a, b);
  }
  emit_two(gate.kind, gate.name, pos_[static_cast<std::size_t>(v1)], pos_[static_cast<std::size_t>(v2)], gate.tag, out);
  swaps_ += swaps.size();
  if (cfg_.restore_mapping) {
    for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
      emit_two(OpKind::Swap, "swap", it->first, it->second, "restore", out);
      apply_swap(it->first, it->second);
    }
    swaps_ += swaps.size();
  }
}

CompiledCircuit route_circuit(const CircuitDag& dag, const PartitionRegistry& registry,
                              const ChipletBackend& backend, const RoutingConfig& cfg) {
  if (registry.num_qubits() != dag.num_qubits()) {
    fail(ErrorKind::Validation, "route", "registry and circuit disagree on qubit count");
  }
  CompiledCircuit result;
  result.initial_layout = physical_layout(backend, registry);
  Router router(backend, cfg);
  router.set_layout(result.initial_layout, registry.owners());

  std::vector<GateNode> out;
  out.reserve(dag.size());
  for (const GateNode& g : dag.nodes()) router.route_gate(g, out);

  result.dag = CircuitDag::build(std::move(out), backend.num_qubits());
  result.final_layout = router.positions();
  result.swap_count = router.swap_count();
  result.link_usage = router.usage();
  result.link_traversals = router.traversals();
  result.patch_violations = router.patch_violations();
  result.warnings = router.warnings();
  return result;
}

}  // namespace chipmap
