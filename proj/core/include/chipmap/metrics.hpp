#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/ir.hpp"
#include "chipmap/route.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chipmap {

enum class UtilDenominator { Used, All };

UtilDenominator parse_util_denominator(std::string_view s);

struct StatsOptions {
  UtilDenominator util_denominator = UtilDenominator::Used;
  bool cx_expand = false;  // report SWAP as three CX in gates2q_compiled / gate_overhead
};

struct CompileStats {
  int depth_original = 0;
  int depth_compiled = 0;
  double depth_overhead = 1.0;

  std::size_t gates2q_original = 0;
  std::size_t gates2q_compiled = 0;  // SWAP counted once
  double gate_overhead = 1.0;
  std::size_t gates2q_compiled_cx = 0;  // SWAP expanded to three CX
  double gate_overhead_cx = 1.0;

  std::size_t swap_count = 0;
  std::size_t inter_chiplet_2q = 0;
  std::size_t link_traversals = 0;
  std::size_t patch_violations = 0;

  int n_qubits = 0;
  int used_chiplets = 0;
  double utilization = 0.0;

  std::vector<std::pair<std::string, double>> wall_time;  // stage -> seconds, in pipeline order
};

/// Pure function of its inputs. `registry` must be fully enriched.
CompileStats stats(const CircuitDag& original, const CompiledCircuit& compiled, const ChipletBackend& backend,
                   const PartitionRegistry& registry, const StatsOptions& options = {});

nlohmann::json to_json(const CompileStats& s);

/// Column names of csv_row, without wall times unless requested.
std::vector<std::string> csv_columns(bool with_wall_time = false);
std::vector<std::string> csv_row(const CompileStats& s, bool with_wall_time = false);

/// One commented header line of column names and one data line, for gnuplot.
std::string gnuplot_dump(const CompileStats& s);

/// Shortest round-trip decimal text for a double.
std::string format_number(double v);

}  // namespace chipmap
