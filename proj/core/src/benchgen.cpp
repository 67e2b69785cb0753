#include "chipmap/benchgen.hpp"

#include "chipmap/error.hpp"

#include <algorithm>
#include <cmath>

namespace chipmap {

namespace {

void check_distance(int d) {
  if (d < 3 || d % 2 == 0) fail(ErrorKind::Validation, "benchgen", "code distance must be odd and >= 3");
}

struct Patch {
  PartitionId id = 0;
  int base = 0;
  int side = 0;

  int at(int r, int c) const { return base + r * side + c; }
  bool is_data(int r, int c) const { return (r + c) % 2 == 0; }
};

void add_patch(CircuitInput& in, const Patch& p) {
  PartitionGeometry geo{p.side, p.side, {}};
  for (int r = 0; r < p.side; ++r) {
    for (int c = 0; c < p.side; ++c) {
      (*in.partitions)[p.at(r, c)] = p.id;
      geo.locals[p.at(r, c)] = LocalPos{r, c};
    }
  }
  in.geometry[p.id] = std::move(geo);
}

void each_cell(const Patch& p, bool data, const auto& fn) {
  for (int r = 0; r < p.side; ++r) {
    for (int c = 0; c < p.side; ++c) {
      if (p.is_data(r, c) == data) fn(r, c);
    }
  }
}

void push(CircuitInput& in, OpKind kind, std::vector<QubitId> qs, const char* tag) {
  in.gates.push_back(GateNode::make(kind, std::move(qs), tag));
}

void data_op(CircuitInput& in, const Patch& p, OpKind kind) {
  each_cell(p, true, [&](int r, int c) { push(in, kind, {p.at(r, c)}, "data"); });
}

void stabilizer_round(CircuitInput& in, const std::vector<Patch>& patches) {
  static constexpr int kDirs[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
  for (const Patch& p : patches) {
    each_cell(p, false, [&](int r, int c) { push(in, OpKind::Reset, {p.at(r, c)}, "stab"); });
  }
  for (const auto& dir : kDirs) {
    for (const Patch& p : patches) {
      each_cell(p, false, [&](int r, int c) {
        const int nr = r + dir[0];
        const int nc = c + dir[1];
        if (nr < 0 || nc < 0 || nr >= p.side || nc >= p.side) return;
        const int anc = p.at(r, c);
        const int data = p.at(nr, nc);
        if (r % 2 == 1) {
          push(in, OpKind::CX, {anc, data}, "stab");
        } else {
          push(in, OpKind::CX, {data, anc}, "stab");
        }
      });
    }
  }
  for (const Patch& p : patches) {
    each_cell(p, false, [&](int r, int c) { push(in, OpKind::Measure, {p.at(r, c)}, "stab"); });
  }
  std::vector<QubitId> all;
  for (const Patch& p : patches) {
    for (int q = p.base; q < p.base + p.side * p.side; ++q) all.push_back(q);
  }
  push(in, OpKind::Barrier, std::move(all), "round");
}

}  // namespace

int patch_side(int d) { return 2 * d - 1; }

CircuitInput gen_memory_circuit(int d, int rounds) {
  check_distance(d);
  if (rounds < 1) fail(ErrorKind::Validation, "benchgen", "rounds must be >= 1");
  const int side = patch_side(d);
  CircuitInput in;
  in.n_qubits = side * side;
  in.partitions.emplace();
  const Patch p{0, 0, side};
  add_patch(in, p);
  data_op(in, p, OpKind::Reset);
  for (int r = 0; r < rounds; ++r) stabilizer_round(in, {p});
  data_op(in, p, OpKind::Measure);
  return in;
}

CircuitInput gen_ls_cnot_circuit(int d, int n_cnots, int rounds) {
  check_distance(d);
  if (n_cnots < 1) fail(ErrorKind::Validation, "benchgen", "n_cnots must be >= 1");
  if (rounds < 1) fail(ErrorKind::Validation, "benchgen", "rounds must be >= 1");
  const int side = patch_side(d);
  const int cells = side * side;
  CircuitInput in;
  in.n_qubits = 3 * n_cnots * cells;
  in.partitions.emplace();
  for (int b = 0; b < n_cnots; ++b) {
    std::vector<Patch> block;
    for (int j = 0; j < 3; ++j) {
      const PartitionId id = 3 * b + j;
      block.push_back(Patch{id, id * cells, side});
      add_patch(in, block.back());
    }
    in.hints[3 * b + 1] = LayoutHint{Direction::Below, 3 * b};
    in.hints[3 * b + 2] = LayoutHint{Direction::Below, 3 * b + 1};

    for (const Patch& p : block) data_op(in, p, OpKind::Reset);
    for (int r = 0; r < rounds; ++r) stabilizer_round(in, block);
    for (int j = 0; j < 2; ++j) {
      const Patch& upper = block[static_cast<std::size_t>(j)];
      const Patch& lower = block[static_cast<std::size_t>(j + 1)];
      for (int c = 0; c < side; c += 2) {
        push(in, OpKind::CX, {upper.at(side - 1, c), lower.at(0, c)}, "merge");
      }
    }
    for (const Patch& p : block) data_op(in, p, OpKind::Measure);
  }
  return in;
}

BackendSpec gen_backend_for(const CircuitInput& circuit, const BackendGenOptions& options,
                            std::vector<std::string>* warnings) {
  if (!(options.headroom >= 0.0)) fail(ErrorKind::Validation, "benchgen", "headroom must be >= 0");
  int side = 0;
  std::size_t n_partitions = 0;
  if (circuit.partitions) {
    std::map<PartitionId, int> counts;
    for (const auto& [q, pid] : *circuit.partitions) ++counts[pid];
    n_partitions = counts.size();
    for (const auto& [pid, n] : counts) {
      auto it = circuit.geometry.find(pid);
      if (it != circuit.geometry.end() && it->second.width > 0 && it->second.height > 0) {
        side = std::max({side, it->second.width, it->second.height});
      } else {
        const auto [w, h] = squarest_box(static_cast<std::size_t>(n));
        side = std::max({side, w, h});
      }
    }
  } else {
    n_partitions = 1;
    const auto [w, h] = squarest_box(static_cast<std::size_t>(std::max(circuit.n_qubits, 1)));
    side = std::max(w, h);
  }
  // Small epsilon keeps exact squares (e.g. headroom 0) from rounding up.
  const int chip = static_cast<int>(std::ceil(side * std::sqrt(1.0 + options.headroom) - 1e-9));

  BackendSpec spec;
  spec.chip_w = spec.chip_h = std::max(chip, 1);
  if (options.grid) {
    spec.grid_rows = options.grid->first;
    spec.grid_cols = options.grid->second;
  } else {
    int count = 1;
    while (static_cast<std::size_t>(count) <= n_partitions) count *= 2;
    int log2 = 0;
    while ((1 << (log2 + 1)) <= count) ++log2;
    spec.grid_rows = 1 << (log2 / 2);
    spec.grid_cols = count / spec.grid_rows;
  }
  spec.links = generate_links(spec.grid_rows, spec.grid_cols, spec.chip_w, spec.chip_h, options.n_inter, options.eps,
                              warnings);
  return spec;
}

}  // namespace chipmap
