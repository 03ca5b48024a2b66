#pragma once

#include <string>
#include <vector>

#include "planforge/pddl/ast.hpp"

namespace planforge::pddl {

/// Canonical pretty-printer. 4-space indent, one predicate per line, one
/// :action block per action in declaration order. Total on valid input and
/// idempotent: parse(format(d)) == d and format(parse(format(d))) ==
/// format(d).
std::string format_domain(const Domain& d);

std::string format_problem(const Problem& p);

std::string format_literal(const Literal& lit);
std::string format_condition(const std::vector<Literal>& lits);

/// Whitespace-insensitive token stream of a PDDL text; "(a b)" and
/// "( a\n b )" tokenize identically. Comments are dropped, symbols folded
/// to lower case.
std::vector<std::string> tokenize(const std::string& text);

}  // namespace planforge::pddl
