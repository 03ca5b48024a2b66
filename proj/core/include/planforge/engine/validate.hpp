#pragma once

#include <string>
#include <vector>

#include "planforge/engine/ground.hpp"
#include "planforge/engine/plan.hpp"

namespace planforge::engine {

struct ValidationReport {
  enum class Status { Valid, Invalid, GoalUnsatisfied };

  Status status = Status::Valid;
  int failed_step = -1;            // 0-based, Invalid only
  std::string violated;            // literal text, Invalid only
  std::vector<std::string> missing_goal;  // literal texts, GoalUnsatisfied only

  bool valid() const { return status == Status::Valid; }
  std::string to_string() const;
  std::string to_json_string() const;
};

/// Simulate the plan from the initial state. Reports, never throws on
/// invalid plans: the first inapplicable step yields Invalid with the
/// violated literal, a complete but goal-missing run yields
/// GoalUnsatisfied with every unmet goal literal.
ValidationReport validate_plan(const GroundTask& task, const Plan& plan);

/// Same, resolving textual action lines ("(pickup a)") against the task.
/// An unknown ground action is Invalid at that step.
ValidationReport validate_plan(const GroundTask& task, const std::vector<std::string>& lines);

ValidationReport validate_plan(const pddl::Domain& d, const pddl::Problem& p,
                               const std::vector<std::string>& lines);

}  // namespace planforge::engine
