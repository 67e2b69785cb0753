#pragma once

#include <compare>
#include <cstdlib>

namespace chipmap {

using QubitId = int;
using PartitionId = int;
using ChipId = int;

/// Cell inside a patch's bounding box.
struct LocalPos {
  int row = 0;
  int col = 0;
  auto operator<=>(const LocalPos&) const = default;
};

/// Axis-aligned rectangle of cells, origin at the top-left.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long area() const { return static_cast<long>(w) * h; }
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool contains(int cx, int cy) const { return cx >= x && cx < x + w && cy >= y && cy < y + h; }
  bool contains(const Rect& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  bool overlaps(const Rect& o) const {
    return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
  }
  bool operator==(const Rect&) const = default;
};

/// Physical location: chiplet plus cell coordinates within it.
struct PhysCoord {
  ChipId chip = 0;
  int x = 0;
  int y = 0;
  auto operator<=>(const PhysCoord&) const = default;
};

/// A partition's rectangle on a chiplet (alpha plus region).
struct Placement {
  PartitionId partition = 0;
  ChipId chip = 0;
  Rect rect;
  bool operator==(const Placement&) const = default;
};

inline int manhattan(int x0, int y0, int x1, int y1) { return std::abs(x0 - x1) + std::abs(y0 - y1); }

}  // namespace chipmap
