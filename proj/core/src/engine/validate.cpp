#include "planforge/engine/validate.hpp"

#include <nlohmann/json.hpp>

namespace planforge::engine {

std::string ValidationReport::to_string() const {
  switch (status) {
    case Status::Valid:
      return "valid";
    case Status::Invalid:
      return "invalid at step " + std::to_string(failed_step) + ": " + violated;
    case Status::GoalUnsatisfied: {
      std::string out = "goal unsatisfied:";
      for (const auto& g : missing_goal) out += " " + g;
      return out;
    }
  }
  return "valid";
}

std::string ValidationReport::to_json_string() const {
  nlohmann::json j;
  switch (status) {
    case Status::Valid: j["status"] = "valid"; break;
    case Status::Invalid: j["status"] = "invalid"; break;
    case Status::GoalUnsatisfied: j["status"] = "goal-unsatisfied"; break;
  }
  if (status == Status::Invalid) {
    j["failed_step"] = failed_step;
    j["violated"] = violated;
  }
  if (status == Status::GoalUnsatisfied) j["missing_goal"] = missing_goal;
  return j.dump(2);
}

namespace {

ValidationReport simulate(const GroundTask& task, const std::vector<int>& steps,
                          const std::vector<std::string>* texts) {
  ValidationReport report;
  State s = task.init;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    int idx = steps[i];
    if (idx < 0) {
      report.status = ValidationReport::Status::Invalid;
      report.failed_step = static_cast<int>(i);
      report.violated = "unknown ground action " + (*texts)[i];
      return report;
    }
    const GroundAction& a = task.actions[static_cast<std::size_t>(idx)];
    bool ok = true;
    for (const auto& [id, positive] : a.pre_ordered) {
      if (s.contains(id) == positive) continue;
      report.status = ValidationReport::Status::Invalid;
      report.failed_step = static_cast<int>(i);
      std::string text = task.atom_text(id);
      report.violated = positive ? text : "(not " + text + ")";
      ok = false;
      break;
    }
    if (!ok) return report;
    s = apply_unchecked(s, a);
  }
  for (const auto& [id, positive] : task.goal) {
    if (s.contains(id) == positive) continue;
    std::string text = task.atom_text(id);
    report.missing_goal.push_back(positive ? text : "(not " + text + ")");
  }
  if (!report.missing_goal.empty())
    report.status = ValidationReport::Status::GoalUnsatisfied;
  return report;
}

}  // namespace

ValidationReport validate_plan(const GroundTask& task, const Plan& plan) {
  return simulate(task, plan.steps, nullptr);
}

ValidationReport validate_plan(const GroundTask& task, const std::vector<std::string>& lines) {
  std::vector<int> steps;
  steps.reserve(lines.size());
  for (const auto& line : lines) steps.push_back(task.action_index(line));
  return simulate(task, steps, &lines);
}

ValidationReport validate_plan(const pddl::Domain& d, const pddl::Problem& p,
                               const std::vector<std::string>& lines) {
  GroundTask task = ground(d, p);
  return validate_plan(task, lines);
}

}  // namespace planforge::engine
