#include "chipmap/partition.hpp"

#include "chipmap/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chipmap {

namespace {

struct GnEdge {
  int u = 0;
  int v = 0;
  bool alive = true;
};

// Brandes accumulation of edge betweenness on the unweighted live graph.
void edge_betweenness(int n, const std::vector<GnEdge>& edges,
                      const std::vector<std::vector<std::pair<int, int>>>& adj, std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<double> delta(static_cast<std::size_t>(n));
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const int x = order[head];
      for (auto [y, e] : adj[static_cast<std::size_t>(x)]) {
        if (!edges[static_cast<std::size_t>(e)].alive) continue;
        auto& dy = dist[static_cast<std::size_t>(y)];
        if (dy < 0) {
          dy = dist[static_cast<std::size_t>(x)] + 1;
          order.push_back(y);
        }
        if (dy == dist[static_cast<std::size_t>(x)] + 1) sigma[static_cast<std::size_t>(y)] += sigma[static_cast<std::size_t>(x)];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int y = *it;
      for (auto [x, e] : adj[static_cast<std::size_t>(y)]) {
        if (!edges[static_cast<std::size_t>(e)].alive) continue;
        if (dist[static_cast<std::size_t>(x)] != dist[static_cast<std::size_t>(y)] - 1) continue;
        const double c = sigma[static_cast<std::size_t>(x)] / sigma[static_cast<std::size_t>(y)] *
                         (1.0 + delta[static_cast<std::size_t>(y)]);
        out[static_cast<std::size_t>(e)] += c;
        delta[static_cast<std::size_t>(x)] += c;
      }
    }
  }
}

std::vector<std::vector<int>> live_components(int n, const std::vector<GnEdge>& edges,
                                              const std::vector<std::vector<std::pair<int, int>>>& adj) {
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(comps.size());
    comps.emplace_back();
    std::vector<int> stack{s};
    label[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      comps.back().push_back(x);
      for (auto [y, e] : adj[static_cast<std::size_t>(x)]) {
        if (!edges[static_cast<std::size_t>(e)].alive || label[static_cast<std::size_t>(y)] >= 0) continue;
        label[static_cast<std::size_t>(y)] = id;
        stack.push_back(y);
      }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  return comps;  // ordered by smallest member already
}

}  // namespace

double modularity(const InteractionGraph& g, const std::vector<std::vector<int>>& communities) {
  const double m = g.total_weight();
  if (m <= 0.0) return 0.0;
  std::vector<int> label(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t c = 0; c < communities.size(); ++c) {
    for (int v : communities[c]) label[static_cast<std::size_t>(v)] = static_cast<int>(c);
  }
  std::vector<double> inside(communities.size(), 0.0);
  std::vector<double> degree(communities.size(), 0.0);
  for (const WeightedEdge& e : g.edges()) {
    const int la = label[static_cast<std::size_t>(e.a)];
    const int lb = label[static_cast<std::size_t>(e.b)];
    if (la == lb) inside[static_cast<std::size_t>(la)] += e.w;
    degree[static_cast<std::size_t>(la)] += e.w;
    degree[static_cast<std::size_t>(lb)] += e.w;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < communities.size(); ++c) {
    const double share = degree[c] / (2.0 * m);
    q += inside[c] / m - share * share;
  }
  return q;
}

CommunityEstimate estimate_partition_count(const InteractionGraph& g, std::size_t node_budget) {
  const int n = g.num_nodes();
  if (n == 0) fail(ErrorKind::Validation, "partition", "interaction graph is empty");
  if (static_cast<std::size_t>(n) > node_budget) {
    fail(ErrorKind::Infeasible, "partition",
         "community detection budget exceeded (" + std::to_string(n) + " > " + std::to_string(node_budget) +
             " qubits); supply predefined partitions");
  }

  const auto weighted = g.edges();
  std::vector<GnEdge> edges;
  edges.reserve(weighted.size());
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (const WeightedEdge& e : weighted) {
    const int idx = static_cast<int>(edges.size());
    edges.push_back({e.a, e.b, true});
    adj[static_cast<std::size_t>(e.a)].emplace_back(e.b, idx);
    adj[static_cast<std::size_t>(e.b)].emplace_back(e.a, idx);
  }

  CommunityEstimate best;
  best.communities = live_components(n, edges, adj);
  best.modularity = modularity(g, best.communities);
  std::size_t last_count = best.communities.size();

  std::vector<double> between(edges.size(), 0.0);
  std::size_t alive = edges.size();
  while (alive > 0) {
    edge_betweenness(n, edges, adj, between);
    double top = -1.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].alive) top = std::max(top, between[e]);
    }
    const double tol = 1e-9 * std::max(1.0, top);
    // Edges are in lexicographic order, so the first near-maximal one is the
    // smallest endpoint pair among the ties.
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].alive && between[e] >= top - tol) {
        edges[e].alive = false;
        --alive;
        break;
      }
    }
    auto comps = live_components(n, edges, adj);
    if (comps.size() == last_count) continue;
    last_count = comps.size();
    const double q = modularity(g, comps);
    if (q > best.modularity + 1e-12) {
      best.modularity = q;
      best.communities = std::move(comps);
    }
  }

  best.k = static_cast<int>(best.communities.size());
  for (const auto& c : best.communities) best.target_sizes.push_back(static_cast<int>(c.size()));
  return best;
}

double cut_weight(const InteractionGraph& g, std::span<const int> block_of) {
  double cut = 0.0;
  for (const WeightedEdge& e : g.edges()) {
    if (block_of[static_cast<std::size_t>(e.a)] != block_of[static_cast<std::size_t>(e.b)]) cut += e.w;
  }
  return cut;
}

namespace {

// Two-way split of a node subset. Local indices follow ascending global id.
class Bisector {
 public:
  Bisector(const InteractionGraph& g, std::vector<int> nodes) : nodes_(std::move(nodes)) {
    const std::size_t n = nodes_.size();
    std::vector<int> local(static_cast<std::size_t>(g.num_nodes()), -1);
    for (std::size_t i = 0; i < n; ++i) local[static_cast<std::size_t>(nodes_[i])] = static_cast<int>(i);
    adj_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto [v, w] : g.neighbors(nodes_[i])) {
        const int j = local[static_cast<std::size_t>(v)];
        if (j >= 0) adj_[i].emplace_back(j, w);
      }
    }
  }

  // Returns side per local node: 0 = left (size within [lo, hi]).
  std::vector<int> run(int lo, int hi, int target, int restarts) const {
    const int n = static_cast<int>(nodes_.size());
    std::vector<int> seeds;
    if (n <= restarts) {
      seeds.resize(static_cast<std::size_t>(n));
      std::iota(seeds.begin(), seeds.end(), 0);
    } else {
      for (int i = 0; i < restarts; ++i) seeds.push_back(static_cast<int>(static_cast<long>(i) * n / restarts));
    }
    std::vector<int> best;
    double best_cut = 0.0;
    for (int seed : seeds) {
      for (int grow_left : {1, 0}) {
        const int size = grow_left ? target : n - target;
        std::vector<int> side = grow(seed, size, grow_left ? 0 : 1);
        refine(side, lo, hi);
        const double cut = cut_of(side);
        if (best.empty() || cut < best_cut - 1e-12) {
          best = std::move(side);
          best_cut = cut;
        }
      }
    }
    return best;
  }

  const std::vector<int>& nodes() const { return nodes_; }

 private:
  // Grows a block of `size` nodes labelled `label` from `seed` by strongest
  // connection; everything else gets the other label.
  std::vector<int> grow(int seed, int size, int label) const {
    const int n = static_cast<int>(nodes_.size());
    std::vector<int> side(static_cast<std::size_t>(n), 1 - label);
    std::vector<double> conn(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    int count = 0;
    int next = seed;
    while (count < size) {
      in[static_cast<std::size_t>(next)] = true;
      side[static_cast<std::size_t>(next)] = label;
      ++count;
      for (auto [v, w] : adj_[static_cast<std::size_t>(next)]) conn[static_cast<std::size_t>(v)] += w;
      next = -1;
      for (int v = 0; v < n; ++v) {
        if (in[static_cast<std::size_t>(v)]) continue;
        if (next < 0 || conn[static_cast<std::size_t>(v)] > conn[static_cast<std::size_t>(next)] + 1e-12) next = v;
      }
      if (next < 0) break;
    }
    return side;
  }

  double cut_of(const std::vector<int>& side) const {
    double cut = 0.0;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      for (auto [v, w] : adj_[u]) {
        if (static_cast<std::size_t>(v) > u && side[u] != side[static_cast<std::size_t>(v)]) cut += w;
      }
    }
    return cut;
  }

  double gain(const std::vector<int>& side, int v) const {
    double g = 0.0;
    for (auto [u, w] : adj_[static_cast<std::size_t>(v)]) {
      g += side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)] ? w : -w;
    }
    return g;
  }

  double link(int a, int b) const {
    for (auto [v, w] : adj_[static_cast<std::size_t>(a)]) {
      if (v == b) return w;
    }
    return 0.0;
  }

  // Fiduccia-Mattheyses passes with rollback to the best prefix.
  void refine(std::vector<int>& side, int lo, int hi) const {
    const int n = static_cast<int>(side.size());
    int left = static_cast<int>(std::count(side.begin(), side.end(), 0));
    for (int pass = 0; pass < 32; ++pass) {
      std::vector<double> gains(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) gains[static_cast<std::size_t>(v)] = gain(side, v);
      std::vector<bool> locked(static_cast<std::size_t>(n), false);
      std::vector<int> moved;  // node sequence; swaps push two entries
      double delta = 0.0;
      double best_delta = 0.0;
      std::size_t best_len = 0;
      int best_left = left;

      auto flip = [&](int v) {
        side[static_cast<std::size_t>(v)] ^= 1;
        left += side[static_cast<std::size_t>(v)] == 0 ? 1 : -1;
        locked[static_cast<std::size_t>(v)] = true;
        moved.push_back(v);
        gains[static_cast<std::size_t>(v)] = gain(side, v);
        for (auto [u, w] : adj_[static_cast<std::size_t>(v)]) gains[static_cast<std::size_t>(u)] = gain(side, u);
      };

      while (true) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
          if (locked[static_cast<std::size_t>(v)]) continue;
          const int after = left + (side[static_cast<std::size_t>(v)] == 0 ? -1 : 1);
          if (after < lo || after > hi) continue;
          if (pick < 0 || gains[static_cast<std::size_t>(v)] > gains[static_cast<std::size_t>(pick)] + 1e-12) pick = v;
        }
        if (pick >= 0) {
          delta += gains[static_cast<std::size_t>(pick)];
          flip(pick);
        } else {
          std::vector<int> ls, rs;
          for (int v = 0; v < n; ++v) {
            if (locked[static_cast<std::size_t>(v)]) continue;
            (side[static_cast<std::size_t>(v)] == 0 ? ls : rs).push_back(v);
          }
          if (ls.empty() || rs.empty()) break;
          auto by_gain = [&](int a, int b) {
            const double ga = gains[static_cast<std::size_t>(a)];
            const double gb = gains[static_cast<std::size_t>(b)];
            return ga > gb + 1e-12 || (std::abs(ga - gb) <= 1e-12 && a < b);
          };
          std::sort(ls.begin(), ls.end(), by_gain);
          std::sort(rs.begin(), rs.end(), by_gain);
          double best = 0.0;
          int bu = -1, bv = -1;
          for (int u : ls) {
            const double gu = gains[static_cast<std::size_t>(u)];
            if (bu >= 0 && gu + gains[static_cast<std::size_t>(rs.front())] <= best + 1e-12) break;
            for (int v : rs) {
              const double bound = gu + gains[static_cast<std::size_t>(v)];
              if (bu >= 0 && bound <= best + 1e-12) break;
              const double g = bound - 2.0 * link(u, v);
              if (bu < 0 || g > best + 1e-12) {
                best = g;
                bu = u;
                bv = v;
              }
            }
          }
          delta += best;
          flip(bu);
          flip(bv);
        }
        if (delta > best_delta + 1e-12) {
          best_delta = delta;
          best_len = moved.size();
          best_left = left;
        }
      }
      // Roll back everything after the best prefix.
      for (std::size_t i = moved.size(); i > best_len; --i) side[static_cast<std::size_t>(moved[i - 1])] ^= 1;
      left = best_left;
      if (best_len == 0) break;
    }
  }

  std::vector<int> nodes_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
};

struct KwayContext {
  const InteractionGraph& g;
  std::span<const int> caps;
  std::vector<int> bounds;
  const KwayOptions& opts;
  std::vector<int>& block_of;
};

void split_recursive(KwayContext& ctx, std::vector<int> nodes, int b0, int b1) {
  if (b1 - b0 == 1) {
    for (int v : nodes) ctx.block_of[static_cast<std::size_t>(v)] = b0;
    return;
  }
  const int mid = b0 + (b1 - b0) / 2;
  long cap_l = 0, cap_r = 0, max_l = 0, max_r = 0;
  for (int b = b0; b < b1; ++b) {
    (b < mid ? cap_l : cap_r) += ctx.caps[static_cast<std::size_t>(b)];
    (b < mid ? max_l : max_r) += ctx.bounds[static_cast<std::size_t>(b)];
  }
  const long n = static_cast<long>(nodes.size());
  const long lo = std::max<long>(mid - b0, n - max_r);
  const long hi = std::min<long>(max_l, n - (b1 - mid));
  if (lo > hi) {
    fail(ErrorKind::Infeasible, "partition",
         "capacities cannot hold " + std::to_string(n) + " qubits across blocks " + std::to_string(b0) + ".." +
             std::to_string(b1 - 1));
  }
  const double share = cap_l + cap_r > 0 ? static_cast<double>(cap_l) / static_cast<double>(cap_l + cap_r) : 0.5;
  const long target = std::clamp<long>(std::lround(static_cast<double>(n) * share), lo, hi);

  Bisector bisector(ctx.g, std::move(nodes));
  const auto side = bisector.run(static_cast<int>(lo), static_cast<int>(hi), static_cast<int>(target),
                                 std::max(1, ctx.opts.restarts));
  std::vector<int> left, right;
  for (std::size_t i = 0; i < side.size(); ++i) (side[i] == 0 ? left : right).push_back(bisector.nodes()[i]);
  split_recursive(ctx, std::move(left), b0, mid);
  split_recursive(ctx, std::move(right), mid, b1);
}

}  // namespace

KwayResult kway_partition(const InteractionGraph& g, int k, std::span<const int> capacities,
                          const KwayOptions& options) {
  const int n = g.num_nodes();
  if (k < 1) fail(ErrorKind::Validation, "partition", "k must be at least 1");
  if (capacities.size() != static_cast<std::size_t>(k)) {
    fail(ErrorKind::Validation, "partition", "expected " + std::to_string(k) + " capacities");
  }
  if (options.imbalance < 0.0) fail(ErrorKind::Validation, "partition", "imbalance must be non-negative");
  long total = 0;
  std::vector<int> bounds;
  for (int c : capacities) {
    if (c < 0) fail(ErrorKind::Validation, "partition", "negative capacity");
    total += c;
    bounds.push_back(static_cast<int>(std::floor(static_cast<double>(c) * (1.0 + options.imbalance) + 1e-9)));
  }
  if (total < n) {
    fail(ErrorKind::Infeasible, "partition",
         "capacities sum to " + std::to_string(total) + " but the graph has " + std::to_string(n) + " nodes");
  }
  if (n < k) fail(ErrorKind::Infeasible, "partition", "fewer nodes than blocks");

  KwayResult result;
  result.block_of.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> nodes(static_cast<std::size_t>(n));
  std::iota(nodes.begin(), nodes.end(), 0);
  KwayContext ctx{g, capacities, std::move(bounds), options, result.block_of};
  split_recursive(ctx, std::move(nodes), 0, k);
  result.cut = cut_weight(g, result.block_of);
  return result;
}

PartitionRegistry registry_from_blocks(std::span<const int> block_of, int n_qubits) {
  std::map<int, Partition> parts;
  for (int q = 0; q < n_qubits; ++q) {
    const int b = block_of[static_cast<std::size_t>(q)];
    auto& p = parts[b];
    p.id = b;
    p.qubits.push_back(q);
  }
  std::vector<Partition> list;
  for (auto& [_, p] : parts) list.push_back(std::move(p));
  return PartitionRegistry(std::move(list), n_qubits);
}

PartitionRegistry predefined_partitions(const CircuitDag& dag, const std::map<QubitId, PartitionId>& qubit_to_pid,
                                        const std::map<PartitionId, PartitionGeometry>& geometry) {
  const int n = dag.num_qubits();
  std::map<PartitionId, Partition> parts;
  for (const auto& [q, pid] : qubit_to_pid) {
    if (q < 0 || q >= n) {
      fail(ErrorKind::Validation, "partition", "partition map names qubit " + std::to_string(q) + " outside the circuit", q);
    }
    auto& p = parts[pid];
    p.id = pid;
    p.qubits.push_back(q);
  }
  for (int q = 0; q < n; ++q) {
    if (!qubit_to_pid.count(q)) {
      fail(ErrorKind::Validation, "partition", "qubit " + std::to_string(q) + " missing from partition map", q);
    }
  }
  for (const auto& [pid, geo] : geometry) {
    auto it = parts.find(pid);
    if (it == parts.end()) {
      fail(ErrorKind::Validation, "partition", "geometry for unknown partition " + std::to_string(pid), pid);
    }
    it->second.width = geo.width;
    it->second.height = geo.height;
    it->second.locals = geo.locals;
    if (geo.width <= 0 || geo.height <= 0) {
      fail(ErrorKind::Validation, "partition", "partition geometry needs positive width and height", pid);
    }
  }
  std::vector<Partition> list;
  for (auto& [_, p] : parts) list.push_back(std::move(p));
  return PartitionRegistry(std::move(list), n);
}

}  // namespace chipmap
