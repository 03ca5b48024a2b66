#pragma once

#include <cstdint>
#include <string>

#include "planforge/engine/ground.hpp"
#include "planforge/engine/plan.hpp"

namespace planforge::engine {

struct SolveLimits {
  enum class Mode { Bfs, GreedyGoalCount };

  Mode mode = Mode::Bfs;
  std::uint64_t max_expansions = 1'000'000;
  int timeout_ms = 0;  // 0 = none
  std::uint64_t seed = 0;
};

struct SolveResult {
  enum class Status { Solved, Unsolvable, ResourceExhausted };

  Status status = Status::Unsolvable;
  Plan plan;  // empty unless Solved
  std::uint64_t expansions = 0;

  bool solved() const { return status == Status::Solved; }
};

/// Breadth-first search over the ground task (unit costs, so a Solved plan
/// is optimal) or greedy best-first on unsatisfied-goal count. Both are
/// deterministic for fixed inputs; the seed is recorded in the plan
/// provenance but only breaks ties that are already deterministic.
SolveResult solve(const GroundTask& task, const SolveLimits& limits = {});

SolveResult solve(const pddl::Domain& d, const pddl::Problem& p,
                  const SolveLimits& limits = {});

}  // namespace planforge::engine
