#include "chipmap/render.hpp"

#include <array>
#include <sstream>

namespace chipmap {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#4e79a7", "#f28e2b", "#59a14f", "#b07aa1",
                                                 "#76b7b2", "#edc948", "#ff9da7", "#9c755f"};

}  // namespace

std::string render_layout_svg(const ChipletBackend& backend, const std::vector<Placement>& placements,
                              const RenderOptions& options) {
  const int cell = options.cell;
  const int gap = options.gap;
  const int chip_px_w = backend.chip_w() * cell;
  const int chip_px_h = backend.chip_h() * cell;
  const int width = backend.grid_cols() * chip_px_w + (backend.grid_cols() + 1) * gap;
  const int height = backend.grid_rows() * chip_px_h + (backend.grid_rows() + 1) * gap;
  auto origin = [&](ChipId chip) {
    const auto [row, col] = backend.chip_grid_pos(chip);
    return std::pair{gap + col * (chip_px_w + gap), gap + row * (chip_px_h + gap)};
  };
  auto centre = [&](const PhysCoord& c) {
    const auto [ox, oy] = origin(c.chip);
    return std::pair{ox + c.x * cell + cell / 2, oy + c.y * cell + cell / 2};
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (ChipId chip = 0; chip < backend.num_chiplets(); ++chip) {
    const auto [ox, oy] = origin(chip);
    svg << "<rect class=\"chiplet\" x=\"" << ox << "\" y=\"" << oy << "\" width=\"" << chip_px_w << "\" height=\""
        << chip_px_h << "\" fill=\"#f4f4f4\" stroke=\"#333\"/>\n";
  }
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const Placement& p = placements[i];
    const auto [ox, oy] = origin(p.chip);
    const int x = ox + p.rect.x * cell;
    const int y = oy + p.rect.y * cell;
    svg << "<rect class=\"partition\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << p.rect.w * cell
        << "\" height=\"" << p.rect.h * cell << "\" fill=\"" << kPalette[i % kPalette.size()]
        << "\" fill-opacity=\"0.6\" stroke=\"#222\"/>\n";
    svg << "<text x=\"" << x + p.rect.w * cell / 2 << "\" y=\"" << y + p.rect.h * cell / 2
        << "\" font-size=\"" << cell << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << p.partition
        << "</text>\n";
  }
  for (const PhysCoord& d : backend.defects()) {
    const auto [ox, oy] = origin(d.chip);
    svg << "<rect class=\"defect\" x=\"" << ox + d.x * cell << "\" y=\"" << oy + d.y * cell << "\" width=\"" << cell
        << "\" height=\"" << cell << "\" fill=\"#d62728\"/>\n";
  }
  if (options.show_links) {
    for (const InterChipLink& l : backend.links()) {
      const auto [ax, ay] = centre(l.a);
      const auto [bx, by] = centre(l.b);
      svg << "<line class=\"link\" x1=\"" << ax << "\" y1=\"" << ay << "\" x2=\"" << bx << "\" y2=\"" << by
          << "\" stroke=\"#111\" stroke-width=\"2\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace chipmap
