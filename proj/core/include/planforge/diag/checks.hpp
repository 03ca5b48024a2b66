#pragma once

#include <vector>

#include "planforge/diag/diagnostic.hpp"
#include "planforge/pddl/ast.hpp"

namespace planforge::diag {

/// Domain-internal checks: declaredness, arity, parameter binding, type
/// consistency of literal arguments, duplicate names, contradictory
/// effects, unused predicates (warning). Diagnostics come out in
/// declaration order of the offending element, then code order.
std::vector<Diagnostic> check_domain(const pddl::Domain& d);

/// Problem-side checks against a domain's types and objects. Atoms whose
/// predicate the domain does not declare are left alone here; cross_check
/// owns those.
std::vector<Diagnostic> check_problem(const pddl::Domain& d, const pddl::Problem& p);

/// Domain/problem interplay: predicates used only by the problem, and
/// goal atoms outside the delete-relaxation reachable set (warning).
/// Meaningful when both sides are individually clean.
std::vector<Diagnostic> cross_check(const pddl::Domain& d, const pddl::Problem& p);

/// Drop duplicate declarations (same name: keep the widest arity, ties go
/// to the latest) and predicates no action mentions. Output keeps
/// first-seen order. Idempotent.
std::vector<pddl::Predicate> prune_predicates(const std::vector<pddl::Predicate>& predicates,
                                              const std::vector<pddl::Action>& actions);

}  // namespace planforge::diag
