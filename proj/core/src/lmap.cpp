#include "chipmap/lmap.hpp"

#include "chipmap/error.hpp"

#include <set>

namespace chipmap {

PartitionRegistry local_map(const ChipletBackend& backend, const PartitionRegistry& registry) {
  if (registry.stage() != Stage::QSigmaAlpha) {
    fail(ErrorKind::StageOrder, "lmap", "local mapping needs a registry at stage Q-sigma-alpha");
  }
  PhiPayload payload;
  std::set<PhysCoord> used;
  for (const Partition& p : registry.partitions()) {
    const Placement& pl = *p.placement;
    auto& phi = payload.phi[p.id];
    for (QubitId q : p.qubits) {
      const LocalPos pos = p.locals.at(q);
      if (pos.col >= pl.rect.w || pos.row >= pl.rect.h) {
        fail(ErrorKind::Validation, "lmap", "local position of qubit " + std::to_string(q) + " outside placed rect", p.id);
      }
      const PhysCoord target{pl.chip, pl.rect.x + pos.col, pl.rect.y + pos.row};
      if (!backend.in_bounds(target)) {
        fail(ErrorKind::Validation, "lmap", "qubit " + std::to_string(q) + " mapped outside its chiplet", p.id);
      }
      if (backend.is_defective(target)) {
        fail(ErrorKind::Validation, "lmap", "qubit " + std::to_string(q) + " mapped onto a defective qubit", p.id);
      }
      if (!used.insert(target).second) {
        fail(ErrorKind::Validation, "lmap", "two virtual qubits share a physical qubit", p.id);
      }
      phi.emplace(q, target);
    }
  }
  return enrich(registry, payload);
}

std::vector<int> physical_layout(const ChipletBackend& backend, const PartitionRegistry& registry) {
  if (registry.stage() != Stage::QSigmaAlphaPhi) {
    fail(ErrorKind::StageOrder, "lmap", "physical layout needs a fully enriched registry");
  }
  std::vector<int> layout(static_cast<std::size_t>(registry.num_qubits()), -1);
  for (const Partition& p : registry.partitions()) {
    for (const auto& [q, c] : *p.phi) layout[static_cast<std::size_t>(q)] = backend.global_id(c);
  }
  return layout;
}

}  // namespace chipmap
