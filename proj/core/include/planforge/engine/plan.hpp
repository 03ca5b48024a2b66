#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planforge/engine/ground.hpp"

namespace planforge::engine {

struct Plan {
  std::vector<int> steps;  // indices into GroundTask::actions
  std::string solver;      // "bfs", "greedy-goal-count", "external", ...
  std::uint64_t seed = 0;

  std::size_t cost() const { return steps.size(); }
  bool operator==(const Plan&) const = default;
};

/// One action per line, "(name obj1 obj2)", lower-case.
std::string plan_to_text(const GroundTask& task, const Plan& plan);

/// Split a plan file into normalized action lines. Comments (;) and blank
/// lines are dropped, symbols folded to lower case. SyntaxError on a line
/// that is not a single parenthesized action.
std::vector<std::string> parse_plan_text(const std::string& text);

}  // namespace planforge::engine
