#include "planforge/pddl/ast.hpp"

namespace planforge::pddl {

namespace {
const std::string kObject = "object";
}

const std::string& TypedName::effective_type() const {
  return type.empty() ? kObject : type;
}

std::string Predicate::clean() const {
  std::string out = "(" + name;
  for (const auto& p : params) {
    out += " " + p.name;
    if (!p.type.empty()) out += " - " + p.type;
  }
  out += ")";
  if (!desc.empty()) out += ": " + desc;
  return out;
}

std::string Atom::to_string() const {
  std::string out = "(" + predicate;
  for (const auto& a : args) out += " " + a;
  out += ")";
  return out;
}

std::string Literal::to_string() const {
  if (positive) return atom.to_string();
  return "(not " + atom.to_string() + ")";
}

const Predicate* Domain::find_predicate(const std::string& n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const Action* Domain::find_action(const std::string& n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

bool Domain::type_declared(const std::string& n) const {
  if (n == kObject) return true;
  for (const auto& t : types)
    if (t.name == n) return true;
  return false;
}

bool Domain::is_subtype(const std::string& t, const std::string& ancestor) const {
  if (t == ancestor) return true;
  if (ancestor == kObject) return type_declared(t);
  std::string cur = t;
  // The forest is acyclic (parser enforces), but guard against handmade
  // Domain values anyway.
  for (std::size_t hops = 0; hops <= types.size(); ++hops) {
    const TypedName* node = nullptr;
    for (const auto& entry : types)
      if (entry.name == cur) {
        node = &entry;
        break;
      }
    if (!node) return false;
    const std::string& parent = node->effective_type();
    if (parent == ancestor) return true;
    if (parent == kObject) return false;
    cur = parent;
  }
  return false;
}

const TypedName* Problem::find_object(const std::string& n) const {
  for (const auto& o : objects)
    if (o.name == n) return &o;
  return nullptr;
}

}  // namespace planforge::pddl
