#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/geometry.hpp"

#include <string>
#include <vector>

namespace chipmap {

struct RenderOptions {
  int cell = 12;  // pixels per qubit
  int gap = 16;   // pixels between chiplets
  bool show_links = true;
};

/// SVG of the chiplet grid with placed partitions, defective cells and links.
std::string render_layout_svg(const ChipletBackend& backend, const std::vector<Placement>& placements,
                              const RenderOptions& options = {});

}  // namespace chipmap
