#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace planforge::pddl {

/// A parameter or object entry. An empty `type` means the type was not
/// written in the source; it still reads as "object" through effective_type().
struct TypedName {
  std::string name;
  std::string type;

  const std::string& effective_type() const;

  bool operator==(const TypedName&) const = default;
};

/// Predicate signature plus the bookkeeping the builders carry around:
/// `desc` is the natural-language gloss, `raw` the string it was parsed from.
struct Predicate {
  std::string name;
  std::string desc;
  std::string raw;
  std::vector<TypedName> params;

  std::size_t arity() const { return params.size(); }

  /// Canonical one-line rendering: "(name ?p - type ...)" plus ": desc"
  /// when a description is present. Types are printed only if declared.
  std::string clean() const;

  bool operator==(const Predicate&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  std::string to_string() const;

  bool operator==(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  std::string to_string() const;

  bool operator==(const Literal&) const = default;
};

struct Action {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;

  bool operator==(const Action&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypedName> types;  // name + parent, declaration order
  std::vector<Predicate> predicates;
  std::vector<Action> actions;

  const Predicate* find_predicate(const std::string& name) const;
  const Action* find_action(const std::string& name) const;
  bool type_declared(const std::string& name) const;

  /// True if `t` equals `ancestor` or reaches it through parent links.
  /// Every declared type implicitly descends from "object".
  bool is_subtype(const std::string& t, const std::string& ancestor) const;

  bool operator==(const Domain&) const = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Literal> goal;

  const TypedName* find_object(const std::string& name) const;

  bool operator==(const Problem&) const = default;
};

}  // namespace planforge::pddl
