#include "chipmap/gmap.hpp"

#include "chipmap/error.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <optional>
#include <set>
#include <string>

namespace chipmap {

PlacementMode parse_placement_mode(std::string_view s) {
  if (s == "center") return PlacementMode::Center;
  if (s == "size-aware") return PlacementMode::SizeAware;
  fail(ErrorKind::Validation, "gmap", "unknown placement mode '" + std::string(s) + "'");
}

Direction parse_direction(std::string_view s) {
  if (s == "below") return Direction::Below;
  if (s == "right") return Direction::Right;
  if (s == "above") return Direction::Above;
  if (s == "left") return Direction::Left;
  if (s.empty() || s == "none") return Direction::None;
  fail(ErrorKind::Validation, "gmap", "unknown layout direction '" + std::string(s) + "'");
}

RelativeRef parse_relative_ref(std::string_view s) {
  if (s == "order") return RelativeRef::Order;
  if (s == "weight") return RelativeRef::Weight;
  fail(ErrorKind::Validation, "gmap", "unknown relative reference '" + std::string(s) + "'");
}

const char* to_string(PlacementMode m) noexcept { return m == PlacementMode::Center ? "center" : "size-aware"; }

const char* to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Below: return "below";
    case Direction::Right: return "right";
    case Direction::Above: return "above";
    case Direction::Left: return "left";
    case Direction::None: break;
  }
  return "none";
}

Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::Below: return Direction::Above;
    case Direction::Above: return Direction::Below;
    case Direction::Right: return Direction::Left;
    case Direction::Left: return Direction::Right;
    case Direction::None: break;
  }
  return Direction::None;
}

std::vector<Rect> guillotine_split(const Rect& region, const Rect& placed) {
  std::vector<Rect> pieces;
  Rect r = region;
  if (placed.y > r.y) {
    pieces.push_back({r.x, r.y, r.w, placed.y - r.y});
    r.h -= placed.y - r.y;
    r.y = placed.y;
  }
  if (placed.x > r.x) {
    pieces.push_back({r.x, r.y, placed.x - r.x, r.h});
    r.w -= placed.x - r.x;
    r.x = placed.x;
  }
  const int left_w = r.w - placed.w;
  const int left_h = r.h - placed.h;
  Rect right, bottom;
  if (left_w < left_h) {
    right = {placed.right(), r.y, left_w, placed.h};
    bottom = {r.x, placed.bottom(), r.w, left_h};
  } else {
    right = {placed.right(), r.y, left_w, r.h};
    bottom = {r.x, placed.bottom(), placed.w, left_h};
  }
  if (right.area() > 0) pieces.push_back(right);
  if (bottom.area() > 0) pieces.push_back(bottom);
  return pieces;
}

BinState BinState::init(const ChipletBackend& backend) {
  BinState bins;
  bins.chip_w_ = backend.chip_w();
  bins.chip_h_ = backend.chip_h();
  bins.grid_rows_ = backend.grid_rows();
  bins.grid_cols_ = backend.grid_cols();
  const auto n = static_cast<std::size_t>(backend.num_chiplets());
  bins.free_.assign(n, {Rect{0, 0, bins.chip_w_, bins.chip_h_}});
  bins.placed_.assign(n, {});
  bins.blocked_.assign(n, {});
  for (const PhysCoord& d : backend.defects()) {
    const Rect cell{d.x, d.y, 1, 1};
    bins.carve(d.chip, cell);
    bins.blocked_[static_cast<std::size_t>(d.chip)].push_back(cell);
  }
  return bins;
}

long BinState::free_area(ChipId chip) const {
  long a = 0;
  for (const Rect& r : free_regions(chip)) a += r.area();
  return a;
}

long BinState::placed_area(ChipId chip) const {
  long a = 0;
  for (const Rect& r : placed(chip)) a += r.area();
  return a;
}

long BinState::blocked_area(ChipId chip) const { return static_cast<long>(blocked(chip).size()); }

bool BinState::can_place(ChipId chip, const Rect& rect) const {
  if (chip < 0 || chip >= num_chiplets()) return false;
  return std::any_of(free_regions(chip).begin(), free_regions(chip).end(),
                     [&](const Rect& r) { return r.contains(rect); });
}

void BinState::carve(ChipId chip, const Rect& rect) {
  auto& regions = free_[static_cast<std::size_t>(chip)];
  auto it = std::find_if(regions.begin(), regions.end(), [&](const Rect& r) { return r.contains(rect); });
  if (it == regions.end()) {
    fail(ErrorKind::NoFit, "gmap", "rect does not fit a free region of chiplet " + std::to_string(chip), chip);
  }
  const Rect region = *it;
  regions.erase(it);
  for (const Rect& piece : guillotine_split(region, rect)) regions.push_back(piece);
}

void BinState::commit(ChipId chip, const Rect& rect) {
  carve(chip, rect);
  placed_[static_cast<std::size_t>(chip)].push_back(rect);
}

std::pair<int, int> BinState::global_origin(ChipId chip, const Rect& rect) const {
  return {(chip % grid_cols_) * chip_w_ + rect.x, (chip / grid_cols_) * chip_h_ + rect.y};
}

namespace {

struct Candidate {
  bool found = false;
  long dist = 0;
  int x = 0;
  int y = 0;

  bool better_than(const Candidate& o) const {
    if (!o.found) return found;
    if (!found) return false;
    if (dist != o.dist) return dist < o.dist;
    if (y != o.y) return y < o.y;
    return x < o.x;
  }
};

// Picks the coordinate in [lo, hi] whose doubled centre 2*(offset+v)+size is
// closest to `target2`; ties go to the smaller value.
int closest_in_range(int lo, int hi, int offset, int size, long target2) {
  const double ideal = (static_cast<double>(target2) - size) / 2.0 - offset;
  const int a = std::clamp(static_cast<int>(std::floor(ideal)), lo, hi);
  const int b = std::clamp(static_cast<int>(std::ceil(ideal)), lo, hi);
  auto cost = [&](int v) { return std::labs(2L * (offset + v) + size - target2); };
  return cost(b) < cost(a) ? b : a;
}

// Global window a rect must lie in: origin >= (min_gx, min_gy) and far
// corner <= (max_gx, max_gy).
struct Window {
  int min_gx = INT_MIN / 4;
  int min_gy = INT_MIN / 4;
  int max_gx = INT_MAX / 4;
  int max_gy = INT_MAX / 4;
};

// Best anchor on `chip` for a w x h rect whose doubled global centre should
// approach (tx2, ty2), restricted to `win`.
Candidate nearest_anchor(const BinState& bins, ChipId chip, int w, int h, long tx2, long ty2, const Window& win) {
  Candidate best;
  const int ox = (chip % bins.grid_cols()) * bins.chip_w();
  const int oy = (chip / bins.grid_cols()) * bins.chip_h();
  for (const Rect& r : bins.free_regions(chip)) {
    if (r.w < w || r.h < h) continue;
    const int x_lo = std::max(r.x, win.min_gx - ox);
    const int x_hi = std::min(r.x + r.w, win.max_gx - ox) - w;
    const int y_lo = std::max(r.y, win.min_gy - oy);
    const int y_hi = std::min(r.y + r.h, win.max_gy - oy) - h;
    if (x_lo > x_hi || y_lo > y_hi) continue;
    Candidate c;
    c.found = true;
    c.x = closest_in_range(x_lo, x_hi, ox, w, tx2);
    c.y = closest_in_range(y_lo, y_hi, oy, h, ty2);
    c.dist = std::labs(2L * (ox + c.x) + w - tx2) + std::labs(2L * (oy + c.y) + h - ty2);
    if (c.better_than(best)) best = c;
  }
  return best;
}

[[noreturn]] void no_fit(PartitionId id, int w, int h) {
  fail(ErrorKind::NoFit, "gmap",
       "partition " + std::to_string(id) + " (" + std::to_string(w) + "x" + std::to_string(h) +
           ") fits no free region of the backend",
       id);
}

}  // namespace

namespace {

// place_partition restricted to chiplets at grid row >= min_row and column
// >= min_col; returns nullopt when none of them has room.
std::optional<Placement> place_first(BinState& bins, PartitionId id, int w, int h, PlacementMode mode, int min_row,
                                     int min_col) {
  const int n = bins.num_chiplets();
  auto allowed = [&](ChipId c) { return c / bins.grid_cols() >= min_row && c % bins.grid_cols() >= min_col; };
  if (mode == PlacementMode::Center) {
    const Rect centred{(bins.chip_w() - w) / 2, (bins.chip_h() - h) / 2, w, h};
    if (centred.x >= 0 && centred.y >= 0) {
      for (ChipId c = 0; c < n; ++c) {
        if (allowed(c) && bins.can_place(c, centred)) {
          bins.commit(c, centred);
          return Placement{id, c, centred};
        }
      }
    }
    for (ChipId c = 0; c < n; ++c) {
      if (!allowed(c)) continue;
      const auto [gx, gy] = bins.global_origin(c, Rect{});
      const long tx2 = 2L * gx + bins.chip_w();
      const long ty2 = 2L * gy + bins.chip_h();
      const Candidate cand = nearest_anchor(bins, c, w, h, tx2, ty2, Window{});
      if (cand.found) {
        const Rect rect{cand.x, cand.y, w, h};
        bins.commit(c, rect);
        return Placement{id, c, rect};
      }
    }
    return std::nullopt;
  }

  for (ChipId c = 0; c < n; ++c) {
    if (!allowed(c)) continue;
    const Rect* best = nullptr;
    for (const Rect& r : bins.free_regions(c)) {
      if (r.w < w || r.h < h) continue;
      if (!best || r.y < best->y || (r.y == best->y && r.x < best->x)) best = &r;
    }
    if (best) {
      const Rect rect{best->x, best->y, w, h};
      bins.commit(c, rect);
      return Placement{id, c, rect};
    }
  }
  return std::nullopt;
}

}  // namespace

Placement place_partition(BinState& bins, PartitionId id, int w, int h, PlacementMode mode) {
  if (w <= 0 || h <= 0) fail(ErrorKind::Validation, "gmap", "partition box must be positive", id);
  if (auto pl = place_first(bins, id, w, h, mode, 0, 0)) return *pl;
  no_fit(id, w, h);
}

Placement place_partition(BinState& bins, const Partition& p, PlacementMode mode) {
  return place_partition(bins, p.id, p.width, p.height, mode);
}

Placement place_partition_relative(BinState& bins, PartitionId id, int w, int h, const Placement& ref,
                                   Direction hint) {
  if (w <= 0 || h <= 0) fail(ErrorKind::Validation, "gmap", "partition box must be positive", id);
  const auto [rgx, rgy] = bins.global_origin(ref.chip, ref.rect);
  const long tx2 = 2L * rgx + ref.rect.w;
  const long ty2 = 2L * rgy + ref.rect.h;

  const int n = bins.num_chiplets();
  const auto [ref_row, ref_col] = std::pair{ref.chip / bins.grid_cols(), ref.chip % bins.grid_cols()};
  auto chip_distance = [&](ChipId c) {
    return std::abs(c / bins.grid_cols() - ref_row) + std::abs(c % bins.grid_cols() - ref_col);
  };
  auto in_hint_direction = [&](ChipId c) {
    switch (hint) {
      case Direction::Below: return c / bins.grid_cols() > ref_row;
      case Direction::Right: return c % bins.grid_cols() > ref_col;
      case Direction::Above: return c / bins.grid_cols() < ref_row;
      case Direction::Left: return c % bins.grid_cols() < ref_col;
      case Direction::None: break;
    }
    return false;
  };
  std::vector<ChipId> chips;
  for (ChipId c = 0; c < n; ++c) chips.push_back(c);
  std::stable_sort(chips.begin(), chips.end(), [&](ChipId a, ChipId b) {
    const int da = chip_distance(a);
    const int db = chip_distance(b);
    if (da != db) return da < db;
    return in_hint_direction(a) && !in_hint_direction(b);
  });

  auto search = [&](Direction dir) -> std::optional<Placement> {
    Window win;
    if (dir == Direction::Right) win.min_gx = rgx + ref.rect.w;
    if (dir == Direction::Below) win.min_gy = rgy + ref.rect.h;
    if (dir == Direction::Left) win.max_gx = rgx;
    if (dir == Direction::Above) win.max_gy = rgy;
    for (ChipId c : chips) {
      const Candidate cand = nearest_anchor(bins, c, w, h, tx2, ty2, win);
      if (cand.found) return Placement{id, c, Rect{cand.x, cand.y, w, h}};
    }
    return std::nullopt;
  };

  std::optional<Placement> found;
  if (hint != Direction::None) found = search(hint);
  if (!found) found = search(Direction::None);
  if (!found) no_fit(id, w, h);
  bins.commit(found->chip, found->rect);
  return *found;
}

Placement place_partition_relative(BinState& bins, const Partition& p, const Placement& ref, Direction hint) {
  return place_partition_relative(bins, p.id, p.width, p.height, ref, hint);
}

namespace {

// Grid rows / columns the hint graph of `component` extends above and to the
// left of `root`, walking hints in both directions.
std::pair<int, int> hint_reach(const std::map<PartitionId, LayoutHint>& hints, const std::vector<PartitionId>& component,
                               PartitionId root) {
  if (hints.empty()) return {0, 0};
  const std::set<PartitionId> members(component.begin(), component.end());
  std::map<PartitionId, std::pair<int, int>> offset{{root, {0, 0}}};
  std::vector<PartitionId> stack{root};
  int min_row = 0;
  int min_col = 0;
  while (!stack.empty()) {
    const PartitionId cur = stack.back();
    stack.pop_back();
    const auto [r, c] = offset[cur];
    auto visit = [&](PartitionId next, int dr, int dc) {
      if (!members.count(next) || offset.count(next)) return;
      offset[next] = {r + dr, c + dc};
      min_row = std::min(min_row, r + dr);
      min_col = std::min(min_col, c + dc);
      stack.push_back(next);
    };
    for (const auto& [subject, h] : hints) {
      const int dr = h.dir == Direction::Below ? 1 : h.dir == Direction::Above ? -1 : 0;
      const int dc = h.dir == Direction::Right ? 1 : h.dir == Direction::Left ? -1 : 0;
      if (subject == cur) visit(h.ref, -dr, -dc);
      if (h.ref == cur) visit(subject, dr, dc);
    }
  }
  return {-min_row, -min_col};
}

}  // namespace

GlobalMapResult global_map(const ChipletBackend& backend, const SequencedOrder& order,
                           const PartitionRegistry& registry, const PartitionGraph& pg,
                           const GlobalMapOptions& options) {
  if (registry.stage() != Stage::QSigma) {
    fail(ErrorKind::StageOrder, "gmap", "global mapping needs a registry at stage Q-sigma");
  }
  const auto flat = order.flattened();
  if (flat.size() != registry.size()) fail(ErrorKind::Validation, "gmap", "sequence does not cover the registry");
  for (PartitionId id : flat) {
    if (!registry.contains(id)) fail(ErrorKind::Validation, "gmap", "sequence names unknown partition", id);
  }

  GlobalMapResult result;
  result.bins = BinState::init(backend);
  std::map<PartitionId, Placement> placed;

  for (const auto& component : order.components) {
    PartitionId previous = -1;
    for (PartitionId id : component) {
      const Partition& p = registry.at(id);
      Placement pl;
      if (previous < 0) {
        // Leave grid room above / left of the first partition for the
        // partitions hinted to sit above / left of it.
        const auto [up, left] = hint_reach(options.hints, component, id);
        std::optional<Placement> first;
        if (p.width <= 0 || p.height <= 0) fail(ErrorKind::Validation, "gmap", "partition box must be positive", id);
        if (up > 0 || left > 0) first = place_first(result.bins, id, p.width, p.height, options.mode, up, left);
        pl = first ? *first : place_partition(result.bins, p, options.mode);
      } else {
        PartitionId ref = previous;
        Direction dir = Direction::None;
        auto hint = options.hints.find(id);
        PartitionId inverse_of = -1;
        for (const auto& [other, h] : options.hints) {
          if (h.ref == id && h.dir != Direction::None && placed.count(other)) {
            inverse_of = other;
            break;
          }
        }
        if (hint != options.hints.end() && placed.count(hint->second.ref)) {
          ref = hint->second.ref;
          dir = hint->second.dir;
        } else if (inverse_of >= 0) {
          ref = inverse_of;
          dir = opposite(options.hints.at(inverse_of).dir);
        } else if (options.relative_ref == RelativeRef::Weight) {
          double best = 0.0;
          for (const Placement& other : result.placements) {
            const double w = pg.weight(id, other.partition);
            if (w > best + 1e-12) {
              best = w;
              ref = other.partition;
            }
          }
        }
        pl = place_partition_relative(result.bins, p, placed.at(ref), dir);
      }
      placed.emplace(id, pl);
      result.placements.push_back(pl);
      previous = id;
    }
  }
  result.registry = enrich(registry, AlphaPayload{result.placements});
  return result;
}

}  // namespace chipmap
