#pragma once

#include "chipmap/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chipmap {

/// Coupling between edge qubits of two grid-adjacent chiplets.
struct InterChipLink {
  PhysCoord a;
  PhysCoord b;
  double epsilon = 0.0;  // link error rate
};

/// How auto-generated links draw their error rate: a fixed value, or
/// base * u with u uniform in [scale_lo, scale_hi] from a seeded stream.
struct EpsilonSpec {
  double base = 1e-3;
  bool randomized = false;
  double scale_lo = 1.0;
  double scale_hi = 1.0;
  std::uint64_t seed = 0;
};

struct BackendSpec {
  int grid_rows = 1;
  int grid_cols = 1;
  int chip_w = 1;
  int chip_h = 1;
  std::vector<InterChipLink> links;
  std::vector<PhysCoord> defects;
  bool allow_non_pow2 = false;
};

/// Positions along an edge of `length` cells in link-allocation order.
/// Any prefix of the sequence is spread over the edge, and shorter
/// prefixes are subsets of longer ones.
std::vector<int> edge_link_order(int length);

/// Links between every pair of grid-adjacent chiplets, `per_edge` each,
/// clipped to the facing edge length. Clipping and corner conflicts are
/// reported through `warnings`.
std::vector<InterChipLink> generate_links(int grid_rows, int grid_cols, int chip_w, int chip_h, int per_edge,
                                          const EpsilonSpec& eps, std::vector<std::string>* warnings = nullptr);

/// Validated chiplet architecture. Global physical ids are row-major within
/// a chiplet, chiplets row-major in the grid. Immutable after build.
class ChipletBackend {
 public:
  ChipletBackend() = default;

  /// Throws CompileError(Validation) for malformed specs. Links touching a
  /// defective qubit are dropped and reported in warnings().
  static ChipletBackend build(const BackendSpec& spec);

  int grid_rows() const noexcept { return grid_rows_; }
  int grid_cols() const noexcept { return grid_cols_; }
  int chip_w() const noexcept { return chip_w_; }
  int chip_h() const noexcept { return chip_h_; }
  int num_chiplets() const noexcept { return grid_rows_ * grid_cols_; }
  int qubits_per_chiplet() const noexcept { return chip_w_ * chip_h_; }
  int num_qubits() const noexcept { return num_chiplets() * qubits_per_chiplet(); }

  int global_id(const PhysCoord& c) const noexcept { return c.chip * qubits_per_chiplet() + c.y * chip_w_ + c.x; }
  PhysCoord coord(int id) const noexcept;
  ChipId chip_of(int id) const noexcept { return id / qubits_per_chiplet(); }
  std::pair<int, int> chip_grid_pos(ChipId chip) const noexcept { return {chip / grid_cols_, chip % grid_cols_}; }
  int chip_distance(ChipId a, ChipId b) const noexcept;
  bool in_bounds(const PhysCoord& c) const noexcept;

  bool is_defective(int id) const noexcept { return defective_[static_cast<std::size_t>(id)]; }
  bool is_defective(const PhysCoord& c) const noexcept { return is_defective(global_id(c)); }
  std::vector<PhysCoord> defects() const;
  std::size_t num_defects() const noexcept { return num_defects_; }

  /// Functional links only.
  const std::vector<InterChipLink>& links() const noexcept { return links_; }
  /// Index of the link attached to physical qubit `id`, if any.
  std::optional<int> link_at(int id) const noexcept;
  /// Index of the link joining qubits `p` and `q` (either orientation).
  std::optional<int> link_between(int p, int q) const noexcept;

  /// True when p and q are both functional and coupled.
  bool coupled(int p, int q) const noexcept;
  /// Functional neighbours of `id`, ascending.
  std::vector<int> neighbors(int id) const;

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  const BackendSpec& spec() const noexcept { return spec_; }

 private:
  BackendSpec spec_;
  int grid_rows_ = 0;
  int grid_cols_ = 0;
  int chip_w_ = 0;
  int chip_h_ = 0;
  std::vector<bool> defective_;
  std::size_t num_defects_ = 0;
  std::vector<InterChipLink> links_;
  std::vector<int> link_of_qubit_;
  std::vector<std::string> warnings_;
};

/// Explicit coupling graph: nodes are functional qubits, edges the
/// intra-chiplet 4-neighbour couplings plus functional links.
struct CouplingGraph {
  struct Edge {
    int a = 0;
    int b = 0;
    int link = -1;  // -1 for intra-chiplet couplings
    double epsilon = 0.0;
  };

  std::vector<bool> active;
  std::vector<std::vector<int>> adjacency;
  std::vector<Edge> edges;

  std::size_t num_nodes() const;
  std::size_t num_edges() const noexcept { return edges.size(); }
};

CouplingGraph coupling_graph(const ChipletBackend& backend);

}  // namespace chipmap
