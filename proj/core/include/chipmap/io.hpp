#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/input.hpp"
#include "chipmap/ir.hpp"
#include "chipmap/route.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chipmap {

inline constexpr int kSchemaVersion = 1;

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// Circuit JSON: n_qubits, gates [{op, qubits, tag?}], optional partitions
/// {"q": pid}, partition_geometry {"pid": {width, height, locals}} and
/// layout_hints {"pid": {"dir": "below"|"right", "ref": pid}}.
/// Throws CompileError(Validation) naming the offending field.
CircuitInput circuit_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CircuitInput& c);

/// Backend JSON: grid [rows, cols], chiplet [w, h], links, defects, or the
/// auto_links shorthand {per_edge, eps: float | {base, scale_range, seed}}.
/// A seedless randomized eps uses `default_seed`.
BackendSpec backend_from_json(const nlohmann::json& j, std::uint64_t default_seed = 0,
                              std::vector<std::string>* warnings = nullptr);
nlohmann::json to_json(const BackendSpec& spec);

/// "0.001" for a fixed rate, "0.001:1:10" for base scaled uniformly in [1, 10].
EpsilonSpec parse_eps_spec(std::string_view text, std::uint64_t seed);

nlohmann::json gate_to_json(const GateNode& g);

nlohmann::json compiled_to_json(const CompiledCircuit& c, const ChipletBackend& backend);
/// Partition placements in sequence order.
nlohmann::json placements_to_json(const PartitionRegistry& registry);
/// {"virtual id": {chip, x, y}}
nlohmann::json mapping_to_json(const PartitionRegistry& registry);

/// Structural check of a compiled document, plus coupling of every
/// two-qubit gate when a backend is supplied. Empty when valid.
std::vector<std::string> validate_compiled(const nlohmann::json& j, const ChipletBackend* backend = nullptr);

}  // namespace chipmap
