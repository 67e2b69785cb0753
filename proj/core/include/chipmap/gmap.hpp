#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/ir.hpp"
#include "chipmap/sequence.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace chipmap {

enum class PlacementMode { Center, SizeAware };
enum class Direction { None, Below, Right, Above, Left };
enum class RelativeRef { Order, Weight };

PlacementMode parse_placement_mode(std::string_view s);
Direction parse_direction(std::string_view s);
RelativeRef parse_relative_ref(std::string_view s);
const char* to_string(PlacementMode m) noexcept;
const char* to_string(Direction d) noexcept;

Direction opposite(Direction d) noexcept;

/// Placement hint: put a partition below / right of `ref`. When `ref` is
/// placed after the hinted partition the hint is applied in reverse.
struct LayoutHint {
  Direction dir = Direction::None;
  PartitionId ref = -1;
};

/// Guillotine cut of `region` after reserving `placed` (which must lie
/// inside it). Strips above and to the left of `placed` are cut off first;
/// the rest is split with the shorter-leftover-axis rule, ties splitting
/// vertically (right piece spans the full height). Empty pieces are
/// dropped; the pieces plus `placed` tile `region` exactly.
std::vector<Rect> guillotine_split(const Rect& region, const Rect& placed);

/// Free rectangles per chiplet plus placed rects and defect cells.
class BinState {
 public:
  BinState() = default;

  /// One free region per chiplet, with a 1x1 no-placement zone carved out
  /// for every defective qubit.
  static BinState init(const ChipletBackend& backend);

  int num_chiplets() const noexcept { return static_cast<int>(free_.size()); }
  int chip_w() const noexcept { return chip_w_; }
  int chip_h() const noexcept { return chip_h_; }
  int grid_cols() const noexcept { return grid_cols_; }
  int grid_rows() const noexcept { return grid_rows_; }

  const std::vector<Rect>& free_regions(ChipId chip) const { return free_.at(static_cast<std::size_t>(chip)); }
  const std::vector<Rect>& placed(ChipId chip) const { return placed_.at(static_cast<std::size_t>(chip)); }
  const std::vector<Rect>& blocked(ChipId chip) const { return blocked_.at(static_cast<std::size_t>(chip)); }

  long free_area(ChipId chip) const;
  long placed_area(ChipId chip) const;
  long blocked_area(ChipId chip) const;

  /// True when `rect` lies entirely inside one free region of `chip`.
  bool can_place(ChipId chip, const Rect& rect) const;
  /// Reserves `rect`; throws CompileError(NoFit) if !can_place.
  void commit(ChipId chip, const Rect& rect);

  /// Top-left corner of `rect` in the plane of all chiplets laid out on the grid.
  std::pair<int, int> global_origin(ChipId chip, const Rect& rect) const;

 private:
  void carve(ChipId chip, const Rect& rect);

  int chip_w_ = 0;
  int chip_h_ = 0;
  int grid_rows_ = 0;
  int grid_cols_ = 0;
  std::vector<std::vector<Rect>> free_;
  std::vector<std::vector<Rect>> placed_;
  std::vector<std::vector<Rect>> blocked_;
};

/// First-fit over chiplets in row-major order. `Center` takes the first
/// chiplet whose centred slot is free, falling back to the first chiplet
/// with room at the free anchor nearest its centre. `SizeAware` takes the
/// first chiplet with room and the top-most, then left-most free region
/// corner that fits. Throws CompileError(NoFit).
Placement place_partition(BinState& bins, PartitionId id, int w, int h, PlacementMode mode);
Placement place_partition(BinState& bins, const Partition& p, PlacementMode mode);

/// Nearest free anchor to `ref` (Manhattan distance between rect centres),
/// preferring ref's chiplet and then chiplets by grid distance. A hint
/// restricts anchors to below / right of ref; if nothing satisfies it the
/// search is repeated without the hint. Throws CompileError(NoFit).
Placement place_partition_relative(BinState& bins, PartitionId id, int w, int h, const Placement& ref,
                                   Direction hint = Direction::None);
Placement place_partition_relative(BinState& bins, const Partition& p, const Placement& ref,
                                   Direction hint = Direction::None);

struct GlobalMapOptions {
  PlacementMode mode = PlacementMode::Center;
  RelativeRef relative_ref = RelativeRef::Weight;
  std::map<PartitionId, LayoutHint> hints;
};

struct GlobalMapResult {
  PartitionRegistry registry;  // stage Q-sigma-alpha
  std::vector<Placement> placements;  // in placement order
  BinState bins;
};

/// Places every partition in sequence order: the first partition of each
/// component with place_partition, the rest relative to a reference
/// partition (the hinted one if present, else a placed partition hinted
/// relative to this one, else the most-interacting placed partition or the
/// previous one, per options.relative_ref).
GlobalMapResult global_map(const ChipletBackend& backend, const SequencedOrder& order,
                           const PartitionRegistry& registry, const PartitionGraph& pg,
                           const GlobalMapOptions& options = {});

}  // namespace chipmap
