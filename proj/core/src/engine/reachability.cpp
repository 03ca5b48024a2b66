#include "planforge/engine/reachability.hpp"

namespace planforge::engine {

std::vector<GroundAtom> reachable_atoms(const GroundTask& task) {
  std::vector<bool> reached(task.atoms.size(), false);
  for (int id : task.init.atoms) reached[static_cast<std::size_t>(id)] = true;
  std::vector<bool> fired(task.actions.size(), false);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
      if (fired[ai]) continue;
      const GroundAction& a = task.actions[ai];
      bool ok = true;
      for (int id : a.pre_pos)
        if (!reached[static_cast<std::size_t>(id)]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      fired[ai] = true;
      for (int id : a.add)
        if (!reached[static_cast<std::size_t>(id)]) {
          reached[static_cast<std::size_t>(id)] = true;
          changed = true;
        }
    }
  }

  std::vector<GroundAtom> out;
  for (std::size_t i = 0; i < task.atoms.size(); ++i)
    if (reached[i]) out.push_back(task.atoms[i]);
  return out;  // atom ids follow lexicographic text order, so already sorted
}

}  // namespace planforge::engine
