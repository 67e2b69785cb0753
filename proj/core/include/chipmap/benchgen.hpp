#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/input.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chipmap {

/// Side of the square local grid of one stand-in surface-code patch.
int patch_side(int d);

/// One patch on a (2d-1) x (2d-1) grid. Data qubits sit on cells with even
/// row+col, ancillas on the others (odd rows measure X, even rows Z). Data
/// is reset first and measured last; every round resets the ancillas, runs
/// four nearest-neighbour CNOT layers, measures them and ends in a barrier.
/// Throws CompileError(Validation) unless d is odd >= 3 and rounds >= 1.
CircuitInput gen_memory_circuit(int d, int rounds = 1);

/// n_cnots qubit-disjoint blocks of three patches (control, route ancilla,
/// target; ids 3b, 3b+1, 3b+2). The ancilla is hinted below the control and
/// the target below the ancilla. After the stabilizer rounds each merge is
/// d CNOTs between the bottom row of one patch and the top row of the next.
CircuitInput gen_ls_cnot_circuit(int d, int n_cnots, int rounds = 1);

struct BackendGenOptions {
  double headroom = 0.30;
  std::optional<std::pair<int, int>> grid;  // rows, cols; derived when absent
  int n_inter = 8;
  EpsilonSpec eps;
};

/// Square chiplets of side ceil(s * sqrt(1 + headroom)) for the largest
/// patch side s. Without an explicit grid the chiplet count is the smallest
/// power of two above the partition count, laid out as a near-square grid.
BackendSpec gen_backend_for(const CircuitInput& circuit, const BackendGenOptions& options,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace chipmap
