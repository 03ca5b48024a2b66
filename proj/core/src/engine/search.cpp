#include "planforge/engine/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <queue>
#include <unordered_map>

namespace planforge::engine {

namespace {

struct Space {
  std::vector<State> states;
  std::unordered_map<State, int, StateHash> ids;
  std::vector<int> parent;
  std::vector<int> via;

  int intern(const State& s, int from, int action) {
    auto it = ids.find(s);
    if (it != ids.end()) return -1;
    int id = static_cast<int>(states.size());
    ids.emplace(s, id);
    states.push_back(s);
    parent.push_back(from);
    via.push_back(action);
    return id;
  }

  Plan extract(int goal_id, const std::string& solver, std::uint64_t seed) const {
    Plan plan;
    plan.solver = solver;
    plan.seed = seed;
    for (int cur = goal_id; parent[static_cast<std::size_t>(cur)] >= 0;
         cur = parent[static_cast<std::size_t>(cur)])
      plan.steps.push_back(via[static_cast<std::size_t>(cur)]);
    std::reverse(plan.steps.begin(), plan.steps.end());
    return plan;
  }
};

int goal_distance_estimate(const GroundTask& task, const State& s) {
  int unmet = 0;
  for (const auto& [id, positive] : task.goal)
    if (s.contains(id) != positive) ++unmet;
  return unmet;
}

bool out_of_time(const std::chrono::steady_clock::time_point& deadline, bool has_deadline) {
  return has_deadline && std::chrono::steady_clock::now() > deadline;
}

SolveResult bfs(const GroundTask& task, const SolveLimits& limits) {
  SolveResult res;
  Space space;
  space.intern(task.init, -1, -1);
  if (task.goal_satisfied(task.init)) {
    res.status = SolveResult::Status::Solved;
    res.plan = space.extract(0, "bfs", limits.seed);
    return res;
  }

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(limits.timeout_ms);
  bool has_deadline = limits.timeout_ms > 0;

  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    if (res.expansions >= limits.max_expansions ||
        (res.expansions % 1024 == 0 && out_of_time(deadline, has_deadline))) {
      res.status = SolveResult::Status::ResourceExhausted;
      return res;
    }
    int cur = frontier.front();
    frontier.pop_front();
    ++res.expansions;
    State s = space.states[static_cast<std::size_t>(cur)];
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
      const GroundAction& a = task.actions[ai];
      if (!is_applicable(s, a)) continue;
      State next = apply_unchecked(s, a);
      int id = space.intern(next, cur, static_cast<int>(ai));
      if (id < 0) continue;
      if (task.goal_satisfied(next)) {
        res.status = SolveResult::Status::Solved;
        res.plan = space.extract(id, "bfs", limits.seed);
        return res;
      }
      frontier.push_back(id);
    }
  }
  res.status = SolveResult::Status::Unsolvable;
  return res;
}

SolveResult greedy(const GroundTask& task, const SolveLimits& limits) {
  SolveResult res;
  Space space;
  space.intern(task.init, -1, -1);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(limits.timeout_ms);
  bool has_deadline = limits.timeout_ms > 0;

  using Entry = std::pair<std::pair<int, int>, int>;  // (h, insertion), state id
  auto cmp = [](const Entry& a, const Entry& b) { return a.first > b.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);
  int stamp = 0;
  open.push({{goal_distance_estimate(task, task.init), stamp++}, 0});

  std::vector<bool> expanded;
  while (!open.empty()) {
    if (res.expansions >= limits.max_expansions ||
        (res.expansions % 1024 == 0 && out_of_time(deadline, has_deadline))) {
      res.status = SolveResult::Status::ResourceExhausted;
      return res;
    }
    int cur = open.top().second;
    open.pop();
    if (cur < static_cast<int>(expanded.size()) && expanded[static_cast<std::size_t>(cur)])
      continue;
    if (cur >= static_cast<int>(expanded.size())) expanded.resize(static_cast<std::size_t>(cur) + 1, false);
    expanded[static_cast<std::size_t>(cur)] = true;
    ++res.expansions;

    State s = space.states[static_cast<std::size_t>(cur)];
    if (task.goal_satisfied(s)) {
      res.status = SolveResult::Status::Solved;
      res.plan = space.extract(cur, "greedy-goal-count", limits.seed);
      return res;
    }
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
      const GroundAction& a = task.actions[ai];
      if (!is_applicable(s, a)) continue;
      State next = apply_unchecked(s, a);
      int id = space.intern(next, cur, static_cast<int>(ai));
      if (id < 0) continue;
      open.push({{goal_distance_estimate(task, next), stamp++}, id});
    }
  }
  res.status = SolveResult::Status::Unsolvable;
  return res;
}

}  // namespace

SolveResult solve(const GroundTask& task, const SolveLimits& limits) {
  if (limits.mode == SolveLimits::Mode::GreedyGoalCount) return greedy(task, limits);
  return bfs(task, limits);
}

SolveResult solve(const pddl::Domain& d, const pddl::Problem& p, const SolveLimits& limits) {
  GroundTask task = ground(d, p);
  return solve(task, limits);
}

}  // namespace planforge::engine
