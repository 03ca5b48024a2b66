#include "planforge/diag/checks.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "planforge/engine/ground.hpp"
#include "planforge/engine/reachability.hpp"

namespace planforge::diag {

namespace {

struct Sink {
  struct Entry {
    int element;
    int code;
    int seq;
    Diagnostic diag;
  };
  std::vector<Entry> entries;
  std::set<std::string> seen;
  int next_seq = 0;

  void emit(int element, Code code, const std::string& file, const std::string& where,
            const std::string& message, const std::string& hint = "") {
    std::string key = std::to_string(element) + "|" + std::string(code_name(code)) +
                      "|" + where + "|" + message;
    if (!seen.insert(key).second) return;
    entries.push_back(Entry{element, static_cast<int>(code), next_seq++,
                            make_diagnostic(code, file, where, message, hint)});
  }

  std::vector<Diagnostic> sorted() {
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.element != b.element) return a.element < b.element;
      if (a.code != b.code) return a.code < b.code;
      return a.seq < b.seq;
    });
    std::vector<Diagnostic> out;
    out.reserve(entries.size());
    for (auto& e : entries) out.push_back(std::move(e.diag));
    return out;
  }
};

bool is_variable(const std::string& s) { return !s.empty() && s[0] == '?'; }

// Wildcard rule: a slot accepts an argument typed exactly "object" (the
// root) regardless of the slot's type. Generated tasks routinely type
// every object as "object" while predicates carry narrower types; strict
// descent would reject them all.
bool arg_type_ok(const pddl::Domain& d, const std::string& arg_type,
                 const std::string& slot_type) {
  return engine::type_compatible(d, arg_type, slot_type);
}

void check_literal_against_decl(const pddl::Domain& d, Sink& sink, int element,
                                const std::string& where, const pddl::Action& action,
                                const pddl::Literal& lit) {
  const std::string& name = lit.atom.predicate;
  if (name == "=") {
    if (lit.atom.args.size() != 2)
      sink.emit(element, Code::ArityMismatch, "", where,
                "= takes 2 arguments, got " + std::to_string(lit.atom.args.size()));
  } else {
    const pddl::Predicate* decl = d.find_predicate(name);
    if (!decl) {
      sink.emit(element, Code::UndeclaredPredicate, "", where,
                "predicate " + name + " is not declared",
                "declare (" + name + " ...) in :predicates");
    } else if (decl->arity() != lit.atom.args.size()) {
      sink.emit(element, Code::ArityMismatch, "", where,
                name + " takes " + std::to_string(decl->arity()) + " arguments, got " +
                    std::to_string(lit.atom.args.size()));
    } else {
      for (std::size_t i = 0; i < lit.atom.args.size(); ++i) {
        const std::string& arg = lit.atom.args[i];
        if (!is_variable(arg)) continue;  // unbound handled below
        const pddl::TypedName* param = nullptr;
        for (const auto& prm : action.params)
          if (prm.name == arg) {
            param = &prm;
            break;
          }
        if (!param) continue;
        const std::string& slot = decl->params[i].effective_type();
        if (!d.type_declared(param->effective_type()) || !d.type_declared(slot))
          continue;  // the undeclared type already got its own TypeError
        if (!arg_type_ok(d, param->effective_type(), slot))
          sink.emit(element, Code::TypeError, "", where,
                    arg + " has type " + param->effective_type() + " but " + name +
                        " expects " + slot + " at position " + std::to_string(i + 1));
      }
    }
  }
  for (const auto& arg : lit.atom.args) {
    if (name == "=" && !is_variable(arg)) continue;  // equality may mention objects
    if (!is_variable(arg)) {
      sink.emit(element, Code::UnboundVariable, "", where,
                arg + " is not a variable");
      continue;
    }
    bool bound = false;
    for (const auto& prm : action.params)
      if (prm.name == arg) {
        bound = true;
        break;
      }
    if (!bound)
      sink.emit(element, Code::UnboundVariable, "", where,
                arg + " is not a parameter of " + action.name,
                "add " + arg + " to :parameters");
  }
}

}  // namespace

std::vector<Diagnostic> check_domain(const pddl::Domain& d) {
  Sink sink;
  int element = 0;

  for (const auto& t : d.types) {
    if (!d.type_declared(t.effective_type()) && t.effective_type() != "object")
      sink.emit(element, Code::TypeError, "", "type " + t.name,
                "parent type " + t.effective_type() + " is not declared");
    ++element;
  }

  std::set<std::string> used;
  for (const auto& a : d.actions) {
    for (const auto& lit : a.preconditions) used.insert(lit.atom.predicate);
    for (const auto& lit : a.effects) used.insert(lit.atom.predicate);
  }

  std::set<std::string> seen_predicates;
  for (const auto& p : d.predicates) {
    std::string where = "predicate " + p.name;
    if (!seen_predicates.insert(p.name).second) {
      sink.emit(element, Code::DuplicateName, "", where,
                "predicate " + p.name + " is declared more than once");
    } else if (!used.count(p.name)) {
      sink.emit(element, Code::UnusedPredicate, "", where,
                "predicate " + p.name + " is never used by any action",
                "remove it or reference it in an action");
    }
    for (const auto& prm : p.params)
      if (!prm.type.empty() && !d.type_declared(prm.type))
        sink.emit(element, Code::TypeError, "", where,
                  "parameter " + prm.name + " has undeclared type " + prm.type);
    ++element;
  }

  std::set<std::string> seen_actions;
  for (const auto& a : d.actions) {
    std::string where = "action " + a.name;
    if (!seen_actions.insert(a.name).second)
      sink.emit(element, Code::DuplicateName, "", where,
                "action " + a.name + " is declared more than once");
    std::set<std::string> seen_params;
    for (const auto& prm : a.params) {
      if (!seen_params.insert(prm.name).second)
        sink.emit(element, Code::DuplicateName, "", where,
                  "parameter " + prm.name + " is declared more than once");
      if (!prm.type.empty() && !d.type_declared(prm.type))
        sink.emit(element, Code::TypeError, "", where,
                  "parameter " + prm.name + " has undeclared type " + prm.type);
    }
    for (const auto& lit : a.preconditions)
      check_literal_against_decl(d, sink, element, where, a, lit);
    for (const auto& lit : a.effects)
      check_literal_against_decl(d, sink, element, where, a, lit);

    std::set<std::string> adds, dels;
    for (const auto& lit : a.effects)
      (lit.positive ? adds : dels).insert(lit.atom.to_string());
    for (const auto& text : adds)
      if (dels.count(text))
        sink.emit(element, Code::ContradictoryEffect, "", where,
                  text + " is both added and deleted");
    ++element;
  }
  return sink.sorted();
}

std::vector<Diagnostic> check_problem(const pddl::Domain& d, const pddl::Problem& p) {
  Sink sink;
  int element = 0;

  std::set<std::string> seen_objects;
  for (const auto& o : p.objects) {
    std::string where = "object " + o.name;
    if (!seen_objects.insert(o.name).second)
      sink.emit(element, Code::DuplicateName, "", where,
                "object " + o.name + " is declared more than once");
    if (!o.type.empty() && !d.type_declared(o.type))
      sink.emit(element, Code::UnknownObjectType, "", where,
                "object " + o.name + " has undeclared type " + o.type,
                "declare " + o.type + " in the domain :types");
    ++element;
  }

  auto check_ground_atom = [&](const pddl::Atom& atom, const std::string& where,
                               int elem) {
    const pddl::Predicate* decl = d.find_predicate(atom.predicate);
    // Unknown predicates are cross_check's PredicateOnlyInProblem.
    if (decl && decl->arity() != atom.args.size())
      sink.emit(elem, Code::ArityMismatch, "", where,
                atom.predicate + " takes " + std::to_string(decl->arity()) +
                    " arguments, got " + std::to_string(atom.args.size()));
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      const pddl::TypedName* obj = p.find_object(atom.args[i]);
      if (!obj) {
        sink.emit(elem, Code::UnknownObjectType, "", where,
                  atom.args[i] + " is not a declared object",
                  "add " + atom.args[i] + " to :objects");
        continue;
      }
      if (!decl || decl->arity() != atom.args.size()) continue;
      const std::string& slot = decl->params[i].effective_type();
      if (!d.type_declared(obj->effective_type()) || !d.type_declared(slot)) continue;
      if (!arg_type_ok(d, obj->effective_type(), slot))
        sink.emit(elem, Code::TypeError, "", where,
                  atom.args[i] + " has type " + obj->effective_type() + " but " +
                      atom.predicate + " expects " + slot + " at position " +
                      std::to_string(i + 1));
    }
  };

  for (const auto& atom : p.init) {
    check_ground_atom(atom, "init " + atom.to_string(), element);
    ++element;
  }
  for (const auto& lit : p.goal) {
    check_ground_atom(lit.atom, "goal " + lit.to_string(), element);
    ++element;
  }
  return sink.sorted();
}

std::vector<Diagnostic> cross_check(const pddl::Domain& d, const pddl::Problem& p) {
  Sink sink;
  int element = 0;

  std::set<std::string> reported;
  auto check_known = [&](const pddl::Atom& atom, const std::string& section) {
    if (d.find_predicate(atom.predicate)) return;
    if (!reported.insert(atom.predicate).second) return;
    sink.emit(element++, Code::PredicateOnlyInProblem, "",
              section + " " + atom.to_string(),
              "predicate " + atom.predicate + " appears in the problem but not the domain",
              "declare it in the domain or fix the name");
  };
  for (const auto& atom : p.init) check_known(atom, "init");
  for (const auto& lit : p.goal) check_known(lit.atom, "goal");

  try {
    engine::GroundTask task = engine::ground(d, p);
    std::vector<engine::GroundAtom> reached = engine::reachable_atoms(task);
    std::set<std::string> reached_texts;
    for (const auto& a : reached) reached_texts.insert(a.to_string());
    for (const auto& lit : p.goal) {
      if (!lit.positive) continue;  // the relaxation says nothing about negatives
      if (!d.find_predicate(lit.atom.predicate)) continue;
      std::string text = lit.atom.to_string();
      if (!reached_texts.count(text))
        sink.emit(element++, Code::UnreachableGoalAtom, "", "goal " + text,
                  text + " is not reachable from the initial state even ignoring deletes",
                  "check the action effects or the initial state");
    }
  } catch (const std::exception&) {
    // Grounding can fail on unclean inputs; the per-side checks report those.
  }
  return sink.sorted();
}

std::vector<pddl::Predicate> prune_predicates(const std::vector<pddl::Predicate>& predicates,
                                              const std::vector<pddl::Action>& actions) {
  std::set<std::string> used;
  for (const auto& a : actions) {
    for (const auto& lit : a.preconditions) used.insert(lit.atom.predicate);
    for (const auto& lit : a.effects) used.insert(lit.atom.predicate);
  }

  // Best declaration per name: widest arity wins, ties go to the latest.
  std::map<std::string, std::size_t> best;
  for (std::size_t i = 0; i < predicates.size(); ++i) {
    auto it = best.find(predicates[i].name);
    if (it == best.end() || predicates[i].arity() >= predicates[it->second].arity())
      best[predicates[i].name] = i;
  }

  std::vector<pddl::Predicate> out;
  std::set<std::string> emitted;
  for (const auto& p : predicates) {
    if (!used.count(p.name)) continue;
    if (!emitted.insert(p.name).second) continue;
    out.push_back(predicates[best[p.name]]);
  }
  return out;
}

}  // namespace planforge::diag
