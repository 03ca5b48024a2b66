#pragma once

#include <string>
#include <vector>

#include "planforge/pddl/ast.hpp"

namespace planforge::pddl {

/// Parse a PDDL domain. Case-insensitive (everything is folded to lower
/// case), `;` comments are stripped. Only the :strips/:typing/
/// :negative-preconditions/:equality subset is accepted; any other
/// requirement flag or construct raises UnsupportedFeature. No cross
/// checks are performed here (arity, declaredness); those live in the
/// diagnostic checks.
Domain parse_domain(const std::string& text, const std::string& source_name = "<domain>");

Problem parse_problem(const std::string& text, const std::string& source_name = "<problem>");

/// Parse a bare condition like "(and (clear ?x) (not (on ?x ?y)))" into
/// literals. Variables are allowed; used by the builders on LLM output.
std::vector<Literal> parse_condition_text(const std::string& text);

/// Same, but ground: arguments must be object names, as in a goal.
std::vector<Literal> parse_ground_condition_text(const std::string& text);

/// Parse one predicate signature line, e.g.
///   "(truck-at ?t - truck ?l - location): true if ?t is at ?l"
/// into a Predicate (raw = the full line, desc = text after the colon).
/// Raises MalformedSignature on anything else.
Predicate parse_predicate_signature(const std::string& line);

}  // namespace planforge::pddl
