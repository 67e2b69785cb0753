#include "chipmap/backend.hpp"

#include "chipmap/error.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace chipmap {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string describe(const PhysCoord& c) {
  return "(chip " + std::to_string(c.chip) + ", " + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

// Uniform double in [0,1) from the top 53 bits; identical on every platform.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<int> edge_link_order(int length) {
  std::vector<int> order;
  if (length <= 0) return order;
  order.reserve(static_cast<std::size_t>(length));
  std::deque<std::pair<int, int>> intervals{{0, length - 1}};
  while (!intervals.empty()) {
    auto [lo, hi] = intervals.front();
    intervals.pop_front();
    if (lo > hi) continue;
    const int mid = (lo + hi) / 2;
    order.push_back(mid);
    intervals.emplace_back(lo, mid - 1);
    intervals.emplace_back(mid + 1, hi);
  }
  return order;
}

std::vector<InterChipLink> generate_links(int grid_rows, int grid_cols, int chip_w, int chip_h, int per_edge,
                                          const EpsilonSpec& eps, std::vector<std::string>* warnings) {
  std::vector<InterChipLink> links;
  if (per_edge <= 0) return links;
  std::mt19937_64 rng(eps.seed);
  auto draw_eps = [&] {
    if (!eps.randomized) return eps.base;
    return eps.base * (eps.scale_lo + (eps.scale_hi - eps.scale_lo) * unit_draw(rng));
  };
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };

  const int per_chip = chip_w * chip_h;
  std::vector<bool> taken(static_cast<std::size_t>(grid_rows * grid_cols * per_chip), false);
  auto gid = [&](const PhysCoord& c) { return static_cast<std::size_t>(c.chip * per_chip + c.y * chip_w + c.x); };

  auto connect = [&](ChipId left, ChipId right, bool horizontal) {
    const int length = horizontal ? chip_h : chip_w;
    int want = per_edge;
    if (want > length) {
      warn("n_inter " + std::to_string(per_edge) + " exceeds facing edge of " + std::to_string(length) +
           " qubits between chiplets " + std::to_string(left) + " and " + std::to_string(right) + "; clipped");
      want = length;
    }
    int made = 0;
    for (int pos : edge_link_order(length)) {
      if (made == want) break;
      PhysCoord a = horizontal ? PhysCoord{left, chip_w - 1, pos} : PhysCoord{left, pos, chip_h - 1};
      PhysCoord b = horizontal ? PhysCoord{right, 0, pos} : PhysCoord{right, pos, 0};
      if (taken[gid(a)] || taken[gid(b)]) continue;
      taken[gid(a)] = taken[gid(b)] = true;
      links.push_back({a, b, draw_eps()});
      ++made;
    }
    if (made < want) {
      warn("only " + std::to_string(made) + " of " + std::to_string(want) + " links fit between chiplets " +
           std::to_string(left) + " and " + std::to_string(right));
    }
  };

  for (int r = 0; r < grid_rows; ++r) {
    for (int c = 0; c < grid_cols; ++c) {
      const ChipId here = r * grid_cols + c;
      if (c + 1 < grid_cols) connect(here, here + 1, true);
      if (r + 1 < grid_rows) connect(here, here + grid_cols, false);
    }
  }
  return links;
}

ChipletBackend ChipletBackend::build(const BackendSpec& spec) {
  if (spec.grid_rows <= 0 || spec.grid_cols <= 0 || spec.chip_w <= 0 || spec.chip_h <= 0) {
    fail(ErrorKind::Validation, "backend", "grid and chiplet dimensions must be positive");
  }
  const int n_chips = spec.grid_rows * spec.grid_cols;
  if (!spec.allow_non_pow2 && !is_power_of_two(n_chips)) {
    fail(ErrorKind::Validation, "backend",
         "chiplet count " + std::to_string(n_chips) + " is not a power of two (set allow_non_pow2 to override)");
  }

  ChipletBackend be;
  be.spec_ = spec;
  be.grid_rows_ = spec.grid_rows;
  be.grid_cols_ = spec.grid_cols;
  be.chip_w_ = spec.chip_w;
  be.chip_h_ = spec.chip_h;
  be.defective_.assign(static_cast<std::size_t>(be.num_qubits()), false);
  be.link_of_qubit_.assign(static_cast<std::size_t>(be.num_qubits()), -1);

  for (const PhysCoord& d : spec.defects) {
    if (!be.in_bounds(d)) fail(ErrorKind::Validation, "backend", "defect " + describe(d) + " out of range");
    const auto id = static_cast<std::size_t>(be.global_id(d));
    if (!be.defective_[id]) ++be.num_defects_;
    be.defective_[id] = true;
  }

  std::vector<int> owner(static_cast<std::size_t>(be.num_qubits()), -1);
  for (std::size_t i = 0; i < spec.links.size(); ++i) {
    const InterChipLink& link = spec.links[i];
    const long id = static_cast<long>(i);
    if (!be.in_bounds(link.a) || !be.in_bounds(link.b)) {
      fail(ErrorKind::Validation, "backend", "link " + std::to_string(i) + " endpoint out of range", id);
    }
    if (!(link.epsilon > 0.0) || link.epsilon >= 1.0) {
      fail(ErrorKind::Validation, "backend", "link " + std::to_string(i) + " error rate must lie in (0,1)", id);
    }
    auto [ra, ca] = be.chip_grid_pos(link.a.chip);
    auto [rb, cb] = be.chip_grid_pos(link.b.chip);
    bool on_edge = false;
    if (ra == rb && std::abs(ca - cb) == 1) {
      const PhysCoord& west = ca < cb ? link.a : link.b;
      const PhysCoord& east = ca < cb ? link.b : link.a;
      on_edge = west.x == spec.chip_w - 1 && east.x == 0;
    } else if (ca == cb && std::abs(ra - rb) == 1) {
      const PhysCoord& north = ra < rb ? link.a : link.b;
      const PhysCoord& south = ra < rb ? link.b : link.a;
      on_edge = north.y == spec.chip_h - 1 && south.y == 0;
    }
    if (!on_edge) {
      fail(ErrorKind::Validation, "backend",
           "link " + std::to_string(i) + " endpoints " + describe(link.a) + "-" + describe(link.b) +
               " do not lie on a shared chiplet edge",
           id);
    }
    for (const PhysCoord& end : {link.a, link.b}) {
      auto& slot = owner[static_cast<std::size_t>(be.global_id(end))];
      if (slot != -1) {
        fail(ErrorKind::Validation, "backend",
             "qubit " + describe(end) + " carries links " + std::to_string(slot) + " and " + std::to_string(i), id);
      }
      slot = static_cast<int>(i);
    }
    if (be.is_defective(link.a) || be.is_defective(link.b)) {
      be.warnings_.push_back("link " + std::to_string(i) + " dropped: defective endpoint");
      continue;
    }
    const int index = static_cast<int>(be.links_.size());
    be.links_.push_back(link);
    be.link_of_qubit_[static_cast<std::size_t>(be.global_id(link.a))] = index;
    be.link_of_qubit_[static_cast<std::size_t>(be.global_id(link.b))] = index;
  }
  return be;
}

PhysCoord ChipletBackend::coord(int id) const noexcept {
  const int per = qubits_per_chiplet();
  const int local = id % per;
  return {id / per, local % chip_w_, local / chip_w_};
}

int ChipletBackend::chip_distance(ChipId a, ChipId b) const noexcept {
  auto [ra, ca] = chip_grid_pos(a);
  auto [rb, cb] = chip_grid_pos(b);
  return manhattan(ca, ra, cb, rb);
}

bool ChipletBackend::in_bounds(const PhysCoord& c) const noexcept {
  return c.chip >= 0 && c.chip < num_chiplets() && c.x >= 0 && c.x < chip_w_ && c.y >= 0 && c.y < chip_h_;
}

std::vector<PhysCoord> ChipletBackend::defects() const {
  std::vector<PhysCoord> out;
  for (int id = 0; id < num_qubits(); ++id) {
    if (defective_[static_cast<std::size_t>(id)]) out.push_back(coord(id));
  }
  return out;
}

std::optional<int> ChipletBackend::link_at(int id) const noexcept {
  const int link = link_of_qubit_[static_cast<std::size_t>(id)];
  return link < 0 ? std::nullopt : std::optional<int>(link);
}

std::optional<int> ChipletBackend::link_between(int p, int q) const noexcept {
  auto link = link_at(p);
  if (!link) return std::nullopt;
  const InterChipLink& l = links_[static_cast<std::size_t>(*link)];
  const int a = global_id(l.a);
  const int b = global_id(l.b);
  if ((a == p && b == q) || (a == q && b == p)) return link;
  return std::nullopt;
}

bool ChipletBackend::coupled(int p, int q) const noexcept {
  if (p == q || is_defective(p) || is_defective(q)) return false;
  if (chip_of(p) == chip_of(q)) {
    const PhysCoord a = coord(p);
    const PhysCoord b = coord(q);
    return manhattan(a.x, a.y, b.x, b.y) == 1;
  }
  return link_between(p, q).has_value();
}

std::vector<int> ChipletBackend::neighbors(int id) const {
  std::vector<int> out;
  if (is_defective(id)) return out;
  const PhysCoord c = coord(id);
  const int steps[4][2] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};
  for (const auto& s : steps) {
    const PhysCoord n{c.chip, c.x + s[0], c.y + s[1]};
    if (!in_bounds(n)) continue;
    const int nid = global_id(n);
    if (!is_defective(nid)) out.push_back(nid);
  }
  if (auto link = link_at(id)) {
    const InterChipLink& l = links_[static_cast<std::size_t>(*link)];
    const int a = global_id(l.a);
    out.push_back(a == id ? global_id(l.b) : a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CouplingGraph::num_nodes() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

CouplingGraph coupling_graph(const ChipletBackend& backend) {
  CouplingGraph g;
  const int n = backend.num_qubits();
  g.active.resize(static_cast<std::size_t>(n));
  g.adjacency.resize(static_cast<std::size_t>(n));
  for (int id = 0; id < n; ++id) {
    g.active[static_cast<std::size_t>(id)] = !backend.is_defective(id);
    g.adjacency[static_cast<std::size_t>(id)] = backend.neighbors(id);
    for (int other : g.adjacency[static_cast<std::size_t>(id)]) {
      if (other <= id) continue;
      CouplingGraph::Edge e{id, other, -1, 0.0};
      if (auto link = backend.link_between(id, other)) {
        e.link = *link;
        e.epsilon = backend.links()[static_cast<std::size_t>(*link)].epsilon;
      }
      g.edges.push_back(e);
    }
  }
  return g;
}

}  // namespace chipmap
