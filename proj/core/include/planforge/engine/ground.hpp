#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "planforge/pddl/ast.hpp"

namespace planforge::engine {

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;

  std::string to_string() const;

  auto operator<=>(const GroundAtom&) const = default;
};

/// A state is a sorted, duplicate-free set of atom ids. Ids index into
/// GroundTask::atoms and are assigned in lexicographic order of the atom
/// text, so equal states have equal representations everywhere.
struct State {
  std::vector<int> atoms;

  bool contains(int id) const;
  bool operator==(const State&) const = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const;
};

struct GroundAction {
  std::string schema;
  std::vector<std::string> binding;  // one object per schema parameter
  std::string text;                  // "(schema obj1 obj2)"
  std::vector<int> pre_pos;          // sorted, for fast subset checks
  std::vector<int> pre_neg;
  std::vector<int> add;
  std::vector<int> del;
  std::vector<std::pair<int, bool>> pre_ordered;  // declaration order, for reporting
};

struct GroundTask {
  pddl::Domain domain;
  pddl::Problem problem;
  std::vector<GroundAtom> atoms;              // id -> atom
  std::unordered_map<std::string, int> atom_ids;  // text -> id
  std::vector<GroundAction> actions;          // schema order, then lexicographic bindings
  State init;
  std::vector<std::pair<int, bool>> goal;     // atom id, positive?

  int atom_id(const std::string& text) const;  // -1 if unknown
  std::string atom_text(int id) const;
  int action_index(const std::string& text) const;  // -1 if unknown

  bool goal_satisfied(const State& s) const;
};

/// True if `obj_type` may fill a slot of `param_type`. Root-typed objects
/// ("object") are wildcard-compatible with every slot; see the type rule
/// note in the checks module.
bool type_compatible(const pddl::Domain& d, const std::string& obj_type,
                     const std::string& param_type);

/// Instantiate every action schema with all type-consistent bindings.
/// Static (in)equality preconditions are evaluated here and filtered out.
/// Raises TypeMismatch if an object's declared type is not in the domain's
/// type forest.
GroundTask ground(const pddl::Domain& d, const pddl::Problem& p);

bool is_applicable(const State& s, const GroundAction& a);

/// (s \ del) union add. Raises Inapplicable naming the first violated
/// precondition literal.
State apply(const GroundTask& task, const State& s, const GroundAction& a);

State apply_unchecked(const State& s, const GroundAction& a);

}  // namespace planforge::engine
