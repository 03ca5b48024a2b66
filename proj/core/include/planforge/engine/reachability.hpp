#pragma once

#include <vector>

#include "planforge/engine/ground.hpp"

namespace planforge::engine {

/// Delete-relaxation fixpoint: ignore delete effects and negative
/// preconditions, saturate from the initial state. Returns the reachable
/// atoms sorted; an over-approximation of everything actually reachable,
/// so an atom missing here is definitely unreachable.
std::vector<GroundAtom> reachable_atoms(const GroundTask& task);

}  // namespace planforge::engine
